//! Local hybridized mixed operator on one element and its static condensation.
//!
//! With the nodal basis `psi_1 = (x_{k+1} - x)/h`, `psi_2 = (x - x_k)/h` for the
//! flux, one constant for the primal variable, and the traces `lambda_1`,
//! `lambda_2` at the element ends, the local equations read
//!
//! ```text
//! A J + (B^T + C) u + L lambda = 0
//! B J - E u                   = -g_K
//! ```
//!
//! Eliminating `u` gives `J = M lambda + b`.

use crate::dmh::coefficients::ElementCoefficients;
use crate::error::{Error, Result};
use crate::numerics::{local_peclet, stabilization_phi, Stabilization};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementOperator<T> {
    pub h: T,
    /// Stabilized diffusion `D (1 + Phi(Pe))`.
    pub diffusion: T,
    pub peclet: T,
    /// Flux mass matrix `A_K`, weighted by `1/D_h`.
    pub flux_mass: [[T; 2]; 2],
    /// `B_K = (1, -1)`, the divergence of the two flux basis functions.
    pub divergence: [T; 2],
    /// `C_K`, coupling of the drift term with the flux test functions.
    pub drift: [T; 2],
    /// Diagonal of the trace operator `L_K = diag(-1, 1)`.
    pub trace: [T; 2],
    /// Reaction `E_K = c h`.
    pub reaction: T,
    /// Load `g_K = h g`.
    pub load: T,
    /// Schur complement `H_K = B A^{-1} (B^T + C) + E`.
    pub schur: T,
    /// Condensed flux map `M_K`.
    pub condensed: [[T; 2]; 2],
    /// Condensed flux load `b_K`.
    pub condensed_load: [T; 2],
    // cached products used for recovery
    a_inv_g: [T; 2],
    b_a_inv_l: [T; 2],
}

impl<T: Scalar> ElementOperator<T> {
    pub fn new(h: T, coeffs: &ElementCoefficients<T>, stabilization: Stabilization, lumped: bool) -> Result<Self> {
        if !(h > T::zero()) {
            return Err(Error::InvalidMesh("element of nonpositive width".into()));
        }
        let peclet = local_peclet(coeffs.advection, h, coeffs.diffusion);
        let dh = coeffs.diffusion * (T::one() + stabilization_phi(stabilization, peclet));
        let two = T::two();
        let six = T::lit(6.0);

        let (flux_mass, a_inv) = if lumped {
            let a = h / (two * dh);
            let ai = two * dh / h;
            ([[a, T::zero()], [T::zero(), a]], [[ai, T::zero()], [T::zero(), ai]])
        } else {
            let a = h / (T::lit(3.0) * dh);
            let b = h / (six * dh);
            let s = dh / h;
            (
                [[a, b], [b, a]],
                [[T::lit(4.0) * s, -two * s], [-two * s, T::lit(4.0) * s]],
            )
        };

        let divergence = [T::one(), -T::one()];
        let d = -coeffs.advection * h / (two * dh);
        let drift = [d, d];
        let trace = [-T::one(), T::one()];
        let reaction = coeffs.reaction * h;
        let load = coeffs.source * h;

        let g = [divergence[0] + drift[0], divergence[1] + drift[1]];
        let a_inv_g = [
            a_inv[0][0] * g[0] + a_inv[0][1] * g[1],
            a_inv[1][0] * g[0] + a_inv[1][1] * g[1],
        ];
        let schur = divergence[0] * a_inv_g[0] + divergence[1] * a_inv_g[1] + reaction;
        if !(schur > T::zero()) || !schur.is_finite() {
            return Err(Error::InvalidCoefficients {
                element: usize::MAX,
                reason: format!("degenerate Schur complement {schur}"),
            });
        }
        let mut a_inv_l = [[T::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                a_inv_l[i][j] = a_inv[i][j] * trace[j];
            }
        }
        let b_a_inv_l = [
            divergence[0] * a_inv_l[0][0] + divergence[1] * a_inv_l[1][0],
            divergence[0] * a_inv_l[0][1] + divergence[1] * a_inv_l[1][1],
        ];
        let mut condensed = [[T::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                condensed[i][j] = -a_inv_l[i][j] + a_inv_g[i] * b_a_inv_l[j] / schur;
            }
        }
        let condensed_load = [-a_inv_g[0] * load / schur, -a_inv_g[1] * load / schur];

        Ok(ElementOperator {
            h,
            diffusion: dh,
            peclet,
            flux_mass,
            divergence,
            drift,
            trace,
            reaction,
            load,
            schur,
            condensed,
            condensed_load,
            a_inv_g,
            b_a_inv_l,
        })
    }

    /// Element value of the primal variable from the two traces.
    pub fn primal(&self, lambda: [T; 2]) -> T {
        (self.load - self.b_a_inv_l[0] * lambda[0] - self.b_a_inv_l[1] * lambda[1]) / self.schur
    }

    /// Flux at the two element ends from the two traces.
    pub fn flux(&self, lambda: [T; 2]) -> [T; 2] {
        let m = &self.condensed;
        [
            m[0][0] * lambda[0] + m[0][1] * lambda[1] + self.condensed_load[0],
            m[1][0] * lambda[0] + m[1][1] * lambda[1] + self.condensed_load[1],
        ]
    }

    /// Flux from an explicit primal value, i.e. the first local equation solved for `J`.
    pub fn flux_from_primal(&self, u: T, lambda: [T; 2]) -> [T; 2] {
        let l = [self.trace[0] * lambda[0], self.trace[1] * lambda[1]];
        let w = [l[0], l[1]];
        // J = -A^{-1} (G u + L lambda); A^{-1} L lambda = a_inv applied to w
        let a = &self.flux_mass;
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let inv = [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]];
        let ail = [inv[0][0] * w[0] + inv[0][1] * w[1], inv[1][0] * w[0] + inv[1][1] * w[1]];
        [-(self.a_inv_g[0] * u + ail[0]), -(self.a_inv_g[1] * u + ail[1])]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn coeffs(d: f64, v: f64, c: f64, g: f64) -> ElementCoefficients<f64> {
        ElementCoefficients {
            diffusion: d,
            advection: v,
            reaction: c,
            source: g,
        }
    }

    #[test]
    fn pure_diffusion_gives_difference_quotient() {
        let op = ElementOperator::new(0.5, &coeffs(2.0, 0.0, 0.0, 0.0), Stabilization::None, true).unwrap();
        let j = op.flux([1.0, 0.0]);
        assert_relative_eq!(j[0], 4.0, max_relative = 1e-15);
        assert_relative_eq!(j[1], 4.0, max_relative = 1e-15);
        assert_relative_eq!(op.primal([1.0, 0.0]), 0.5, max_relative = 1e-15);
    }

    #[test]
    fn lumped_schur_closed_form() {
        let (d, v, c, h) = (1.5, 0.7, 3.0, 0.2);
        let op = ElementOperator::new(h, &coeffs(d, v, c, 0.0), Stabilization::ScharfetterGummel, true).unwrap();
        assert_relative_eq!(op.schur, 4.0 * op.diffusion / h + c * h, max_relative = 1e-14);
        let op = ElementOperator::new(h, &coeffs(d, v, c, 0.0), Stabilization::None, false).unwrap();
        assert_relative_eq!(op.schur, 12.0 * d / h + c * h, max_relative = 1e-14);
    }

    #[test]
    fn local_equations_hold() {
        for &lumped in &[true, false] {
            let op = ElementOperator::new(0.3, &coeffs(0.8, -1.3, 2.0, 5.0), Stabilization::Upwind, lumped).unwrap();
            let lam = [0.4, -1.1];
            let u = op.primal(lam);
            let j = op.flux(lam);
            // second equation: B J - E u = -g_K
            let r2 = j[0] - j[1] - op.reaction * u + op.load;
            assert!(r2.abs() < 1e-13);
            let j2 = op.flux_from_primal(u, lam);
            assert_relative_eq!(j[0], j2[0], max_relative = 1e-12);
            assert_relative_eq!(j[1], j2[1], max_relative = 1e-12);
        }
    }

    #[test]
    fn condensed_matrix_rows_sum_to_drift() {
        // constant traces with no load and no reaction carry the pure drift v * lambda
        let op = ElementOperator::new(0.1, &coeffs(1.0, 2.0, 0.0, 0.0), Stabilization::None, true).unwrap();
        let j = op.flux([3.0, 3.0]);
        assert_relative_eq!(j[0], 6.0, max_relative = 1e-14);
        assert_relative_eq!(j[1], 6.0, max_relative = 1e-14);
    }
}
