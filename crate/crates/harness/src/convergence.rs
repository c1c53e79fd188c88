//! Mesh-refinement study on a manufactured advection-diffusion-reaction problem.
//!
//! On `(0, L)` with `D = v = c = 1`, the exact solution is
//! `u = x e^{-x} (L - x)`, so that `u(0) = u(L) = 0`.

use thermoflux_core::dmh::{
    error_norms_with, observed_orders, solve_bvp, BvpCoefficients, DmhOptions, ErrorReport, ExactSolution, Lumping,
    Mesh,
};
use thermoflux_core::{Result, Stabilization};

pub const DEFAULT_LEVELS: [usize; 9] = [10, 20, 40, 80, 160, 320, 640, 1280, 2560];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Manufactured {
    pub length: f64,
}

impl Default for Manufactured {
    fn default() -> Self {
        Manufactured { length: 5.0 }
    }
}

impl Manufactured {
    pub fn source(&self, x: f64) -> f64 {
        let l = self.length;
        (-x).exp() * (x * x - (l + 6.0) * x + 3.0 * l + 2.0)
    }

    pub fn coefficients(&self, mesh: &Mesh<f64>) -> Result<BvpCoefficients<f64>> {
        BvpCoefficients::from_fns(mesh, |_| 1.0, |_| 1.0, |_| 1.0, |x| self.source(x), 0.0, 0.0)
    }
}

impl ExactSolution<f64> for Manufactured {
    fn u(&self, x: f64) -> f64 {
        x * (-x).exp() * (self.length - x)
    }
    fn flux(&self, x: f64) -> f64 {
        let l = self.length;
        -(-x).exp() * (2.0 * x * x - 2.0 * (l + 1.0) * x + l)
    }
    fn flux_derivative(&self, x: f64) -> f64 {
        let l = self.length;
        (-x).exp() * (2.0 * x * x - (2.0 * l + 6.0) * x + 3.0 * l + 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyOptions {
    pub stabilization: Stabilization,
    pub lumping: Lumping,
    /// Gauss points per element in the error integrals.
    pub quadrature: usize,
}

impl Default for StudyOptions {
    fn default() -> Self {
        StudyOptions {
            stabilization: Stabilization::None,
            lumping: Lumping::Off,
            quadrature: 5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConvergenceStudy {
    pub levels: Vec<usize>,
    pub reports: Vec<ErrorReport<f64>>,
}

impl ConvergenceStudy {
    /// Observed orders between consecutive levels for one norm.
    pub fn orders(&self, norm: fn(&ErrorReport<f64>) -> f64) -> Vec<f64> {
        let h: Vec<f64> = self.reports.iter().map(|r| r.h).collect();
        let e: Vec<f64> = self.reports.iter().map(norm).collect();
        observed_orders(&h, &e)
    }
}

/// Named accessors for the six norms, in table order.
/// Reads one error norm out of a report.
pub type NormAccessor = fn(&ErrorReport<f64>) -> f64;

pub const NORMS: [(&str, NormAccessor); 6] = [
    ("u_l2", |r| r.u_l2),
    ("projected_u_l2", |r| r.projected_u_l2),
    ("trace_l2", |r| r.trace_l2),
    ("trace_max", |r| r.trace_max),
    ("flux_l2", |r| r.flux_l2),
    ("flux_h1", |r| r.flux_h1),
];

pub fn run_study(problem: &Manufactured, levels: &[usize], opts: StudyOptions) -> Result<ConvergenceStudy> {
    let mut reports = Vec::with_capacity(levels.len());
    for &n in levels {
        let mesh = Mesh::uniform(0.0, problem.length, n)?;
        let coeffs = problem.coefficients(&mesh)?;
        let sol = solve_bvp(&mesh, &coeffs, DmhOptions::new(opts.stabilization, opts.lumping))?;
        reports.push(error_norms_with(&mesh, &sol, problem, opts.quadrature));
    }
    Ok(ConvergenceStudy {
        levels: levels.to_vec(),
        reports,
    })
}
