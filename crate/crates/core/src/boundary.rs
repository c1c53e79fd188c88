//! Contact conditions: built-in potentials at the channel mouths and the
//! Dirichlet data they induce for potential, concentrations and temperatures.

use crate::error::{Error, Result};
use crate::physics::{electrochemical_potential, thermal_voltage, SpeciesParams};

/// Potentials, bath concentrations (per species, 1/m^3) and temperatures at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct BathConditions {
    pub phi_left: f64,
    pub phi_right: f64,
    pub conc_left: Vec<f64>,
    pub conc_right: Vec<f64>,
    pub t_left: f64,
    pub t_right: f64,
}

impl BathConditions {
    /// Largest bath concentration, used as the reference in Maxwell-Boltzmann statistics.
    pub fn c_ref(&self) -> f64 {
        self.conc_left
            .iter()
            .chain(&self.conc_right)
            .copied()
            .fold(0.0, f64::max)
    }

    pub fn validate(&self, n_species: usize) -> Result<()> {
        if self.conc_left.len() != n_species || self.conc_right.len() != n_species {
            return Err(Error::InvalidParameter(format!(
                "bath concentrations must list {n_species} species"
            )));
        }
        if self
            .conc_left
            .iter()
            .chain(&self.conc_right)
            .any(|&c| !(c > 0.0) || !c.is_finite())
        {
            return Err(Error::InvalidParameter("bath concentrations must be positive".into()));
        }
        if !(self.t_left > 0.0) || !(self.t_right > 0.0) {
            return Err(Error::InvalidParameter("bath temperatures must be positive".into()));
        }
        if !self.phi_left.is_finite() || !self.phi_right.is_finite() {
            return Err(Error::InvalidParameter("bath potentials must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Built-in potential jump at a mouth with fixed charge density `p` (1/m^3).
///
/// Solves `p + sum z_i c_i exp(s z_i V / V_th) = 0`, `s = +1` on the left and
/// `-1` on the right, by safeguarded Newton iteration in `y = V / V_th`.
pub fn builtin_potential(p: f64, valences: &[i32], conc: &[f64], side: Side, t: f64) -> Result<f64> {
    if valences.len() != conc.len() {
        return Err(Error::InvalidParameter(
            "valence and concentration lengths differ".into(),
        ));
    }
    let has_pos = valences.iter().zip(conc).any(|(&z, &c)| z > 0 && c > 0.0);
    let has_neg = valences.iter().zip(conc).any(|(&z, &c)| z < 0 && c > 0.0);
    if !(has_pos && has_neg) && p != 0.0 {
        return Err(Error::InvalidParameter(
            "electroneutral mouth needs both cations and anions".into(),
        ));
    }
    let s = match side {
        Side::Left => 1.0,
        Side::Right => -1.0,
    };
    let scale = p.abs()
        + valences
            .iter()
            .zip(conc)
            .map(|(&z, &c)| z.abs() as f64 * c)
            .sum::<f64>();
    let f = |y: f64| -> (f64, f64) {
        let mut r = p;
        let mut dr = 0.0;
        for (&z, &c) in valences.iter().zip(conc) {
            let z = z as f64;
            let e = (s * z * y).exp();
            r += z * c * e;
            dr += s * z * z * c * e;
        }
        (r / scale, dr / scale)
    };
    // the residual is monotone in y, increasing on the left and decreasing on the right
    let (mut lo, mut hi) = (-40.0_f64, 40.0_f64);
    let increasing = s > 0.0;
    if f(lo).0.signum() == f(hi).0.signum() {
        return Err(Error::InvalidParameter(format!(
            "built-in potential outside [-40, 40] V_th for P = {p:e}"
        )));
    }
    let mut y = 0.0;
    for _ in 0..200 {
        let (r, dr) = f(y);
        if r == 0.0 {
            break;
        }
        if (r > 0.0) == increasing {
            hi = y;
        } else {
            lo = y;
        }
        let mut next = y - r / dr;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let step = next - y;
        y = next;
        if step.abs() <= 1e-15 * (1.0 + y.abs()) {
            break;
        }
    }
    Ok(y * thermal_voltage(t))
}

/// Closed form of [`builtin_potential`] for one monovalent cation and anion at equal concentration.
pub fn builtin_potential_binary(p: f64, c: f64, side: Side, t: f64) -> f64 {
    let y = (-p / (2.0 * c)).asinh();
    match side {
        Side::Left => y * thermal_voltage(t),
        Side::Right => -y * thermal_voltage(t),
    }
}

/// Dirichlet data at `x = 0` (index 0) and `x = d` (index 1).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub phi: [f64; 2],
    pub builtin: [f64; 2],
    /// Concentrations per species at both ends.
    pub conc: [Vec<f64>; 2],
    /// Electrochemical potentials per species at both ends.
    pub phi_ec: [Vec<f64>; 2],
    pub temperature: [f64; 2],
    pub c_ref: f64,
}

/// Dirichlet data from the mouth charge densities `(P(0^-), P(d^+))` and the baths.
pub fn dirichlet_data(
    mouth_charge: [f64; 2],
    species: &[SpeciesParams],
    bath: &BathConditions,
) -> Result<BoundaryData> {
    bath.validate(species.len())?;
    let z: Vec<i32> = species.iter().map(|s| s.valence).collect();
    let c_ref = bath.c_ref();
    let vl = builtin_potential(mouth_charge[0], &z, &bath.conc_left, Side::Left, bath.t_left)?;
    let vr = builtin_potential(mouth_charge[1], &z, &bath.conc_right, Side::Right, bath.t_right)?;
    let (vth_l, vth_r) = (thermal_voltage(bath.t_left), thermal_voltage(bath.t_right));
    let phi = [bath.phi_left - vl, bath.phi_right + vr];
    let conc_l: Vec<f64> = z
        .iter()
        .zip(&bath.conc_left)
        .map(|(&zi, &c)| c * (zi as f64 * vl / vth_l).exp())
        .collect();
    let conc_r: Vec<f64> = z
        .iter()
        .zip(&bath.conc_right)
        .map(|(&zi, &c)| c * (-(zi as f64) * vr / vth_r).exp())
        .collect();
    let ec_l = z
        .iter()
        .zip(&conc_l)
        .map(|(&zi, &c)| electrochemical_potential(c, c_ref, zi as f64, phi[0], bath.t_left))
        .collect();
    let ec_r = z
        .iter()
        .zip(&conc_r)
        .map(|(&zi, &c)| electrochemical_potential(c, c_ref, zi as f64, phi[1], bath.t_right))
        .collect();
    Ok(BoundaryData {
        phi,
        builtin: [vl, vr],
        conc: [conc_l, conc_r],
        phi_ec: [ec_l, ec_r],
        temperature: [bath.t_left, bath.t_right],
        c_ref,
    })
}

/// Mouth electroneutrality residual `|P + sum z c| / (|P| + sum |z| c)` at both ends.
pub fn neutrality_residual(mouth_charge: [f64; 2], species: &[SpeciesParams], data: &BoundaryData) -> [f64; 2] {
    let mut out = [0.0; 2];
    for side in 0..2 {
        let p = mouth_charge[side];
        let mut r = p;
        let mut s = p.abs();
        for (sp, &c) in species.iter().zip(&data.conc[side]) {
            r += sp.z() * c;
            s += sp.z().abs() * c;
        }
        out[side] = r.abs() / s;
    }
    out
}
