//! Discrete and continuous error norms for manufactured-solution studies.

use crate::dmh::assembly::DmhSolution;
use crate::dmh::mesh::Mesh;
use crate::scalar::Scalar;

/// Exact solution of a BVP: primal variable, flux, and flux derivative.
pub trait ExactSolution<T> {
    fn u(&self, x: T) -> T;
    fn flux(&self, x: T) -> T;
    fn flux_derivative(&self, x: T) -> T;
}

/// Gauss-Legendre points and weights on `[-1, 1]`, 1 to 5 points.
pub fn gauss_legendre<T: Scalar>(points: usize) -> (Vec<T>, Vec<T>) {
    let (p, w): (&[f64], &[f64]) = match points {
        1 => (&[0.0], &[2.0]),
        2 => (&[-0.577_350_269_189_625_8, 0.577_350_269_189_625_8], &[1.0, 1.0]),
        3 => (
            &[-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4],
            &[5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0],
        ),
        4 => (
            &[
                -0.861_136_311_594_052_6,
                -0.339_981_043_584_856_3,
                0.339_981_043_584_856_3,
                0.861_136_311_594_052_6,
            ],
            &[
                0.347_854_845_137_453_9,
                0.652_145_154_862_546_1,
                0.652_145_154_862_546_1,
                0.347_854_845_137_453_9,
            ],
        ),
        _ => (
            &[
                -0.906_179_845_938_664,
                -0.538_469_310_105_683_1,
                0.0,
                0.538_469_310_105_683_1,
                0.906_179_845_938_664,
            ],
            &[
                0.236_926_885_056_189_1,
                0.478_628_670_499_366_5,
                0.568_888_888_888_888_9,
                0.478_628_670_499_366_5,
                0.236_926_885_056_189_1,
            ],
        ),
    };
    (
        p.iter().map(|&x| T::lit(x)).collect(),
        w.iter().map(|&x| T::lit(x)).collect(),
    )
}

/// Errors of a discrete solution against an exact one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport<T> {
    pub h: T,
    /// `||u - u_h||_{L2}`
    pub u_l2: T,
    /// `||Pi_0 u - u_h||_{L2}`, with `Pi_0` the element average.
    pub projected_u_l2: T,
    /// `max_i |u(x_i) - lambda_i|`
    pub trace_max: T,
    /// `||u - lambda_h||_{L2}` with `lambda_h` the piecewise linear trace interpolant.
    pub trace_l2: T,
    /// `||J - J_h||_{L2}`
    pub flux_l2: T,
    /// `||J - J_h||_{H1}`
    pub flux_h1: T,
}

/// Error norms with the given number of Gauss points per element.
pub fn error_norms_with<T: Scalar, E: ExactSolution<T>>(
    mesh: &Mesh<T>,
    sol: &DmhSolution<T>,
    exact: &E,
    points: usize,
) -> ErrorReport<T> {
    let (qp, qw) = gauss_legendre::<T>(points);
    let mut u_l2 = T::zero();
    let mut pi_l2 = T::zero();
    let mut lam_l2 = T::zero();
    let mut j_l2 = T::zero();
    let mut dj_l2 = T::zero();
    let mut lam_max = T::zero();
    for (x, l) in mesh.nodes().iter().zip(&sol.lambda) {
        lam_max = lam_max.max((exact.u(*x) - *l).abs());
    }
    for k in 0..mesh.n_elements() {
        let h = mesh.h(k);
        let xm = mesh.midpoint(k);
        let a = mesh.nodes()[k];
        let (l0, l1) = (sol.lambda[k], sol.lambda[k + 1]);
        let (j0, j1) = (sol.flux[k][0], sol.flux[k][1]);
        let djh = (j1 - j0) / h;
        let mut avg = T::zero();
        for (p, w) in qp.iter().zip(&qw) {
            let x = xm + *p * h * T::half();
            let w = *w * h * T::half();
            let s = (x - a) / h;
            let u = exact.u(x);
            avg += w * u;
            u_l2 += w * (u - sol.u[k]).powi(2);
            let trace = l0 + (l1 - l0) * s;
            lam_l2 += w * (u - trace).powi(2);
            let jh = j0 + (j1 - j0) * s;
            j_l2 += w * (exact.flux(x) - jh).powi(2);
            dj_l2 += w * (exact.flux_derivative(x) - djh).powi(2);
        }
        pi_l2 += h * (avg / h - sol.u[k]).powi(2);
    }
    ErrorReport {
        h: mesh.max_h(),
        u_l2: u_l2.sqrt(),
        projected_u_l2: pi_l2.sqrt(),
        trace_max: lam_max,
        trace_l2: lam_l2.sqrt(),
        flux_l2: j_l2.sqrt(),
        flux_h1: (j_l2 + dj_l2).sqrt(),
    }
}

/// Error norms with a 5-point Gauss rule.
pub fn error_norms<T: Scalar, E: ExactSolution<T>>(mesh: &Mesh<T>, sol: &DmhSolution<T>, exact: &E) -> ErrorReport<T> {
    error_norms_with(mesh, sol, exact, 5)
}

/// Observed orders `log(e_i / e_{i+1}) / log(h_i / h_{i+1})` between consecutive meshes.
pub fn observed_orders<T: Scalar>(h: &[T], err: &[T]) -> Vec<T> {
    h.windows(2)
        .zip(err.windows(2))
        .map(|(hh, ee)| (ee[0] / ee[1]).ln() / (hh[0] / hh[1]).ln())
        .collect()
}
