//! Nonlinear Poisson equation `-(eps phi')' = q (P + sum z c(phi))` with
//! Maxwell-Boltzmann concentrations at frozen electrochemical potentials.
//!
//! Each Newton iterate is one hybridized mixed solve with `D = eps`, `v = 0`
//! and a positive reaction coefficient from the charge derivative.

use crate::dmh::{solve_bvp, BvpCoefficients, DmhOptions, ElementCoefficients, ElementOperator, Lumping, Mesh};
use crate::error::{Error, Result};
use crate::numerics::Stabilization;
use crate::physics::{mb_concentration, thermal_voltage, Q};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub max_iters: usize,
    pub max_halvings: usize,
    /// Step tolerance in units of the thermal voltage.
    pub step_tol: f64,
    /// Residual tolerance relative to `q h c_scale`.
    pub residual_tol: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            max_iters: 100,
            max_halvings: 10,
            step_tol: 1e-10,
            residual_tol: 1e-8,
        }
    }
}

/// Mobile species seen by the Poisson equation, with element values of the
/// frozen electrochemical potential and temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct FrozenSpecies {
    pub valence: f64,
    pub phi_ec: Vec<f64>,
    pub temperature: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonProblem<'a> {
    pub mesh: &'a Mesh<f64>,
    pub permittivity: f64,
    /// Fixed charge density per element, 1/m^3.
    pub fixed_charge: &'a [f64],
    pub species: Vec<FrozenSpecies>,
    pub c_ref: f64,
    pub boundary: [f64; 2],
    /// Temperature defining the potential scale of the step tolerance.
    pub reference_temperature: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonSolution {
    pub phi: Vec<f64>,
    pub phi_elem: Vec<f64>,
    /// Field at the nodes, from the continuous displacement flux.
    pub e_nodal: Vec<f64>,
    /// Field per element, `-(phi_{k+1} - phi_k) / h`.
    pub e_elem: Vec<f64>,
    pub iterations: usize,
    /// Relative residual after each accepted step, starting with the initial guess.
    pub residuals: Vec<f64>,
    /// Infinity norm of each full Newton step.
    pub steps: Vec<f64>,
}

impl PoissonProblem<'_> {
    fn element_charge(&self, k: usize, u: f64) -> (f64, f64) {
        // charge density q (P + sum z c) and its negated derivative in u
        let mut rho = self.fixed_charge[k];
        let mut d = 0.0;
        for s in &self.species {
            let t = s.temperature[k];
            let c = mb_concentration(self.c_ref, s.valence, u, s.phi_ec[k], t);
            rho += s.valence * c;
            d += s.valence * s.valence * c / thermal_voltage(t);
        }
        (Q * rho, Q * d)
    }

    fn charge_scale(&self) -> f64 {
        let pmax = self.fixed_charge.iter().fold(0.0_f64, |a, &p| a.max(p.abs()));
        Q * self.mesh.max_h() * pmax.max(self.c_ref)
    }

    fn base_operators(&self) -> Result<Vec<ElementOperator<f64>>> {
        (0..self.mesh.n_elements())
            .map(|k| {
                let e = ElementCoefficients {
                    diffusion: self.permittivity,
                    advection: 0.0,
                    reaction: 0.0,
                    source: 0.0,
                };
                ElementOperator::new(self.mesh.h(k), &e, Stabilization::None, true)
            })
            .collect()
    }

    /// Infinity norm of the discrete residual: element charge balance and nodal flux continuity.
    fn residual(&self, ops: &[ElementOperator<f64>], lambda: &[f64], u: &[f64]) -> f64 {
        let n = u.len();
        let mut r: f64 = 0.0;
        let mut prev_right = 0.0;
        for k in 0..n {
            let j = ops[k].flux_from_primal(u[k], [lambda[k], lambda[k + 1]]);
            let (rho, _) = self.element_charge(k, u[k]);
            r = r.max((j[1] - j[0] - self.mesh.h(k) * rho).abs());
            if k > 0 {
                r = r.max((j[0] - prev_right).abs());
            }
            prev_right = j[1];
        }
        r
    }
}

/// Damped Newton iteration. `initial` holds nodal values and element values.
pub fn solve_nonlinear_poisson(
    problem: &PoissonProblem<'_>,
    initial: (&[f64], &[f64]),
    opts: &NewtonOptions,
) -> Result<PoissonSolution> {
    let mesh = problem.mesh;
    let n_el = mesh.n_elements();
    if problem.fixed_charge.len() != n_el
        || initial.0.len() != n_el + 1
        || initial.1.len() != n_el
        || problem
            .species
            .iter()
            .any(|s| s.phi_ec.len() != n_el || s.temperature.len() != n_el)
    {
        return Err(Error::InvalidParameter("Poisson data does not match the mesh".into()));
    }
    if !(problem.permittivity > 0.0) {
        return Err(Error::InvalidParameter("permittivity must be positive".into()));
    }
    let ops = problem.base_operators()?;
    let scale = problem.charge_scale();
    let vth = thermal_voltage(problem.reference_temperature);

    let mut lambda = initial.0.to_vec();
    lambda[0] = problem.boundary[0];
    lambda[n_el] = problem.boundary[1];
    let mut u = initial.1.to_vec();
    let mut res = problem.residual(&ops, &lambda, &u);
    let mut residuals = vec![res / scale];
    let mut steps = Vec::new();
    let dmh = DmhOptions::new(Stabilization::None, Lumping::On);

    for it in 1..=opts.max_iters {
        let elements: Vec<ElementCoefficients<f64>> = (0..n_el)
            .map(|k| {
                let (rho, d) = problem.element_charge(k, u[k]);
                ElementCoefficients {
                    diffusion: problem.permittivity,
                    advection: 0.0,
                    reaction: d,
                    source: rho + d * u[k],
                }
            })
            .collect();
        let coeffs = BvpCoefficients::new(elements, problem.boundary[0], problem.boundary[1])?;
        let full = solve_bvp(mesh, &coeffs, dmh)?;
        let dl: Vec<f64> = full.lambda.iter().zip(&lambda).map(|(a, b)| a - b).collect();
        let du: Vec<f64> = full.u.iter().zip(&u).map(|(a, b)| a - b).collect();
        let step = dl.iter().chain(&du).fold(0.0_f64, |a, &x| a.max(x.abs()));
        steps.push(step);
        if step <= opts.step_tol * vth && res / scale <= opts.residual_tol {
            // already converged; the update is below round-off of the residual
            return Ok(finish(problem, &ops, lambda, u, it, residuals, steps));
        }

        let floor = 1e-13 * scale;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let lt: Vec<f64> = lambda.iter().zip(&dl).map(|(a, d)| a + t * d).collect();
            let ut: Vec<f64> = u.iter().zip(&du).map(|(a, d)| a + t * d).collect();
            let rt = problem.residual(&ops, &lt, &ut);
            if rt <= res || rt <= floor {
                accepted = Some((lt, ut, rt));
                break;
            }
            t *= 0.5;
        }
        let Some((lt, ut, rt)) = accepted else {
            return Err(Error::NonConvergence {
                solver: "nonlinear Poisson line search",
                iterations: it,
                last_update: step / vth,
            });
        };
        lambda = lt;
        u = ut;
        res = rt;
        residuals.push(res / scale);
        if step <= opts.step_tol * vth && res / scale <= opts.residual_tol {
            return Ok(finish(problem, &ops, lambda, u, it, residuals, steps));
        }
    }
    Err(Error::NonConvergence {
        solver: "nonlinear Poisson",
        iterations: opts.max_iters,
        last_update: steps.last().copied().unwrap_or(f64::NAN) / vth,
    })
}

fn finish(
    problem: &PoissonProblem<'_>,
    ops: &[ElementOperator<f64>],
    lambda: Vec<f64>,
    u: Vec<f64>,
    iterations: usize,
    residuals: Vec<f64>,
    steps: Vec<f64>,
) -> PoissonSolution {
    let mesh = problem.mesh;
    let n = u.len();
    let flux: Vec<[f64; 2]> = (0..n)
        .map(|k| ops[k].flux_from_primal(u[k], [lambda[k], lambda[k + 1]]))
        .collect();
    let mut e_nodal = Vec::with_capacity(n + 1);
    e_nodal.push(flux[0][0] / problem.permittivity);
    for k in 1..n {
        e_nodal.push(0.5 * (flux[k - 1][1] + flux[k][0]) / problem.permittivity);
    }
    e_nodal.push(flux[n - 1][1] / problem.permittivity);
    let e_elem = (0..n).map(|k| -(lambda[k + 1] - lambda[k]) / mesh.h(k)).collect();
    PoissonSolution {
        phi: lambda,
        phi_elem: u,
        e_nodal,
        e_elem,
        iterations,
        residuals,
        steps,
    }
}
