use crate::dmh::coefficients::BvpCoefficients;
use crate::dmh::element::ElementOperator;
use crate::dmh::mesh::Mesh;
use crate::error::{Error, Result};
use crate::numerics::{solve_tridiagonal, Stabilization, TridiagonalSystem};
use crate::scalar::Scalar;

/// Flux mass matrix quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Lumping {
    /// Lumped whenever some element carries a reaction term.
    #[default]
    Auto,
    On,
    Off,
}

impl Lumping {
    pub fn resolve<T: Scalar>(self, coeffs: &BvpCoefficients<T>) -> bool {
        match self {
            Lumping::Auto => coeffs.has_reaction(),
            Lumping::On => true,
            Lumping::Off => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DmhOptions {
    pub stabilization: Stabilization,
    pub lumping: Lumping,
}

impl DmhOptions {
    pub fn new(stabilization: Stabilization, lumping: Lumping) -> Self {
        DmhOptions { stabilization, lumping }
    }
}

/// Discrete solution: nodal traces, element values, and end-point fluxes per element.
#[derive(Debug, Clone, PartialEq)]
pub struct DmhSolution<T> {
    pub lambda: Vec<T>,
    pub u: Vec<T>,
    pub flux: Vec<[T; 2]>,
}

impl<T: Scalar> DmhSolution<T> {
    /// Nodal flux, averaging the two one-sided values at interior nodes.
    pub fn nodal_flux(&self) -> Vec<T> {
        let n = self.flux.len();
        let mut out = Vec::with_capacity(n + 1);
        out.push(self.flux[0][0]);
        for k in 1..n {
            out.push((self.flux[k - 1][1] + self.flux[k][0]) * T::half());
        }
        out.push(self.flux[n - 1][1]);
        out
    }

    /// Largest jump of the flux across interior nodes.
    pub fn max_flux_jump(&self) -> T {
        self.flux
            .windows(2)
            .map(|w| (w[1][0] - w[0][1]).abs())
            .fold(T::zero(), T::max)
    }

    pub fn element_flux_mean(&self) -> Vec<T> {
        self.flux.iter().map(|f| (f[0] + f[1]) * T::half()).collect()
    }
}

pub fn element_operators<T: Scalar>(
    mesh: &Mesh<T>,
    coeffs: &BvpCoefficients<T>,
    opts: DmhOptions,
) -> Result<Vec<ElementOperator<T>>> {
    coeffs.check_mesh(mesh)?;
    let lumped = opts.lumping.resolve(coeffs);
    coeffs
        .elements()
        .iter()
        .enumerate()
        .map(|(k, e)| {
            ElementOperator::new(mesh.h(k), e, opts.stabilization, lumped).map_err(|err| match err {
                Error::InvalidCoefficients { reason, .. } => Error::InvalidCoefficients { element: k, reason },
                other => other,
            })
        })
        .collect()
}

/// Assembles the trace system on the interior nodes, Dirichlet values eliminated.
///
/// Row `i` enforces flux continuity `J_1(K_i) - J_2(K_{i-1}) = 0`.
pub fn assemble_system<T: Scalar>(ops: &[ElementOperator<T>], left: T, right: T) -> TridiagonalSystem<T> {
    let n_el = ops.len();
    let n = n_el - 1;
    let mut sys = TridiagonalSystem::zeros(n);
    for r in 0..n {
        let minus = &ops[r];
        let plus = &ops[r + 1];
        sys.diag[r] = plus.condensed[0][0] - minus.condensed[1][1];
        sys.rhs[r] = minus.condensed_load[1] - plus.condensed_load[0];
        let sub = -minus.condensed[1][0];
        let sup = plus.condensed[0][1];
        if r == 0 {
            sys.rhs[r] -= sub * left;
        } else {
            sys.sub[r - 1] = sub;
        }
        if r + 1 == n {
            sys.rhs[r] -= sup * right;
        } else {
            sys.sup[r] = sup;
        }
    }
    sys
}

/// Builds the element operators and the reduced trace system.
pub fn assemble<T: Scalar>(
    mesh: &Mesh<T>,
    coeffs: &BvpCoefficients<T>,
    opts: DmhOptions,
) -> Result<(Vec<ElementOperator<T>>, TridiagonalSystem<T>)> {
    let ops = element_operators(mesh, coeffs, opts)?;
    let sys = assemble_system(&ops, coeffs.left, coeffs.right);
    Ok((ops, sys))
}

/// Recovers element values and fluxes from a full trace vector.
pub fn recover<T: Scalar>(ops: &[ElementOperator<T>], lambda: Vec<T>) -> DmhSolution<T> {
    let mut u = Vec::with_capacity(ops.len());
    let mut flux = Vec::with_capacity(ops.len());
    for (k, op) in ops.iter().enumerate() {
        let lam = [lambda[k], lambda[k + 1]];
        u.push(op.primal(lam));
        flux.push(op.flux(lam));
    }
    DmhSolution { lambda, u, flux }
}

/// Solves the BVP with the stabilized hybridized mixed method.
pub fn solve_bvp<T: Scalar>(mesh: &Mesh<T>, coeffs: &BvpCoefficients<T>, opts: DmhOptions) -> Result<DmhSolution<T>> {
    let (ops, sys) = assemble(mesh, coeffs, opts)?;
    let interior = solve_tridiagonal(&sys)?;
    let mut lambda = Vec::with_capacity(mesh.n_nodes());
    lambda.push(coeffs.left);
    lambda.extend(interior);
    lambda.push(coeffs.right);
    Ok(recover(&ops, lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dmh::coefficients::ElementCoefficients;
    use approx::assert_relative_eq;

    fn constant(mesh: &Mesh<f64>, d: f64, v: f64, c: f64, g: f64, l: f64, r: f64) -> BvpCoefficients<f64> {
        BvpCoefficients::from_fns(mesh, |_| d, |_| v, |_| c, |_| g, l, r).unwrap()
    }

    #[test]
    fn closed_form_row_unstabilized() {
        // D = 1, v = 1, h = 0.1, no reaction: row (-D/h - v/2, 2D/h, -D/h + v/2), load g h
        let mesh = Mesh::uniform(0.0, 1.0, 10).unwrap();
        let b = constant(&mesh, 1.0, 1.0, 0.0, 2.0, 0.0, 0.0);
        let (_, sys) = assemble(&mesh, &b, DmhOptions::new(Stabilization::None, Lumping::On)).unwrap();
        assert_relative_eq!(sys.sub[3], -10.5, max_relative = 1e-13);
        assert_relative_eq!(sys.diag[4], 20.0, max_relative = 1e-13);
        assert_relative_eq!(sys.sup[4], -9.5, max_relative = 1e-13);
        assert_relative_eq!(sys.rhs[4], 0.2, max_relative = 1e-13);
    }

    #[test]
    fn closed_form_row_with_reaction() {
        let (d, v, c, g, h) = (0.7_f64, 0.0, 4.0, 1.0, 0.05);
        let mesh = Mesh::uniform(0.0, 20.0 * h, 20).unwrap();
        let b = constant(&mesh, d, v, c, g, 0.0, 0.0);
        let (_, sys) = assemble(&mesh, &b, DmhOptions::new(Stabilization::None, Lumping::On)).unwrap();
        let den = 1.0 + c * h * h / (4.0 * d);
        assert_relative_eq!(
            sys.diag[5],
            (2.0 * d / h) * (1.0 + c * h * h / (2.0 * d)) / den,
            max_relative = 1e-13
        );
        assert_relative_eq!(sys.sub[4], -(d / h) / den, max_relative = 1e-13);
        assert_relative_eq!(sys.rhs[5], g * h / den, max_relative = 1e-13);
    }

    #[test]
    fn unit_reaction_row() {
        let mesh = Mesh::uniform(0.0, 4.0, 4).unwrap();
        let b = constant(&mesh, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0);
        let (_, sys) = assemble(&mesh, &b, DmhOptions::new(Stabilization::None, Lumping::On)).unwrap();
        assert_relative_eq!(sys.sub[0], -0.8, max_relative = 1e-14);
        assert_relative_eq!(sys.diag[1], 2.4, max_relative = 1e-14);
        assert_relative_eq!(sys.sup[1], -0.8, max_relative = 1e-14);
        assert_relative_eq!(sys.rhs[1], 0.8, max_relative = 1e-14);
    }

    #[test]
    fn sg_is_nodally_exact_for_constant_coefficients() {
        let (d, v, g) = (0.05_f64, 1.0, 1.0);
        let mesh = Mesh::uniform(0.0, 1.0, 8).unwrap();
        let b = constant(&mesh, d, v, 0.0, g, 0.0, 0.0);
        let sol = solve_bvp(
            &mesh,
            &b,
            DmhOptions::new(Stabilization::ScharfetterGummel, Lumping::On),
        )
        .unwrap();
        // exact: u = x/v - (exp((x-1) v/D) - exp(-v/D)) / (v (1 - exp(-v/D)))
        let exact = |x: f64| x / v - ((v * (x - 1.0) / d).exp() - (-v / d).exp()) / (v * (1.0 - (-v / d).exp()));
        for (x, l) in mesh.nodes().iter().zip(&sol.lambda) {
            assert!((l - exact(*x)).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn flux_is_continuous_and_conservative() {
        let mesh = Mesh::from_nodes(vec![0.0, 0.1, 0.35, 0.4, 0.7, 1.0]).unwrap();
        let els = (0..5)
            .map(|k| ElementCoefficients {
                diffusion: 0.3 + 0.1 * k as f64,
                advection: 2.0 - k as f64,
                reaction: 0.5 * k as f64,
                source: 1.0 + k as f64,
            })
            .collect();
        let b = BvpCoefficients::new(els, 1.0, 0.5).unwrap();
        let sol = solve_bvp(&mesh, &b, DmhOptions::default()).unwrap();
        assert!(sol.max_flux_jump() < 1e-12);
        for k in 0..5 {
            let e = b.elements()[k];
            let h = mesh.h(k);
            let bal = sol.flux[k][1] - sol.flux[k][0] + e.reaction * h * sol.u[k] - e.source * h;
            assert!(bal.abs() < 1e-12);
        }
    }

    #[test]
    fn lumping_irrelevant_without_reaction() {
        let mesh = Mesh::uniform(0.0, 1.0, 7).unwrap();
        let b = constant(&mesh, 0.2, 3.0, 0.0, 1.0, 0.3, -0.2);
        let on = solve_bvp(&mesh, &b, DmhOptions::new(Stabilization::Upwind, Lumping::On)).unwrap();
        let off = solve_bvp(&mesh, &b, DmhOptions::new(Stabilization::Upwind, Lumping::Off)).unwrap();
        for (a, c) in on.lambda.iter().zip(&off.lambda) {
            assert!((a - c).abs() < 1e-13);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let mesh = Mesh::uniform(0.0_f32, 1.0, 16).unwrap();
        let b = BvpCoefficients::from_fns(&mesh, |_| 1.0, |_| 0.0, |_| 0.0, |_| 2.0, 0.0, 0.0).unwrap();
        let sol = solve_bvp(&mesh, &b, DmhOptions::default()).unwrap();
        // -u'' = 2 has u = x (1 - x), reproduced at nodes
        for (x, l) in mesh.nodes().iter().zip(&sol.lambda) {
            assert!((l - x * (1.0 - x)).abs() < 1e-5);
        }
    }
}
