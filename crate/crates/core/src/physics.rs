//! Constants, species and medium data, and closed-form constitutive laws (SI units).

use crate::error::{Error, Result};

/// Elementary charge, C.
pub const Q: f64 = 1.602_176_634e-19;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Vacuum permittivity, F/m.
pub const EPS_0: f64 = 8.854_187_812_8e-12;
/// Avogadro constant, 1/mol.
pub const N_A: f64 = 6.022_140_76e23;

/// Exponent clamp for Maxwell-Boltzmann statistics.
pub const MAX_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SpeciesParams {
    pub name: String,
    pub valence: i32,
    /// Low-field mobility `mu_0`, m^2/(V s).
    pub mobility: f64,
    /// Ion mass, kg.
    pub mass: f64,
    /// Saturation velocity, m/s.
    pub v_sat: f64,
}

impl SpeciesParams {
    pub fn validate(&self) -> Result<()> {
        if self.valence == 0 {
            return Err(Error::InvalidParameter(format!("{}: zero valence", self.name)));
        }
        for (what, x) in [("mobility", self.mobility), ("mass", self.mass), ("v_sat", self.v_sat)] {
            if !(x > 0.0) || !x.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{}: {what} must be positive, got {x}",
                    self.name
                )));
            }
        }
        Ok(())
    }

    pub fn z(&self) -> f64 {
        self.valence as f64
    }
}

/// Electrolyte fluid properties.
#[derive(Debug, Clone, PartialEq)]
pub struct MediumParams {
    /// Absolute permittivity, F/m.
    pub permittivity: f64,
    /// Fluid thermal conductivity `kappa_e`, W/(m K).
    pub thermal_conductivity: f64,
    /// Fluid number density `N_e`, 1/m^3.
    pub number_density: f64,
    /// Fluid particle mass, kg.
    pub particle_mass: f64,
    /// System temperature, K.
    pub temperature: f64,
}

impl MediumParams {
    pub fn validate(&self) -> Result<()> {
        for (what, x) in [
            ("permittivity", self.permittivity),
            ("thermal_conductivity", self.thermal_conductivity),
            ("number_density", self.number_density),
            ("particle_mass", self.particle_mass),
            ("temperature", self.temperature),
        ] {
            if !(x > 0.0) || !x.is_finite() {
                return Err(Error::InvalidParameter(format!("{what} must be positive, got {x}")));
            }
        }
        Ok(())
    }
}

#[inline]
pub fn thermal_voltage(t: f64) -> f64 {
    K_B * t / Q
}

#[inline]
pub fn einstein_diffusivity(mobility: f64, t: f64) -> f64 {
    mobility * thermal_voltage(t)
}

/// Concentration `c_ref exp(z q (phi_ec - phi) / (k_B T))`, exponent clamped to `±700`.
#[inline]
pub fn mb_concentration(c_ref: f64, z: f64, phi: f64, phi_ec: f64, t: f64) -> f64 {
    let e = (z * (phi_ec - phi) / thermal_voltage(t)).clamp(-MAX_EXPONENT, MAX_EXPONENT);
    c_ref * e.exp()
}

/// Inverse of [`mb_concentration`].
#[inline]
pub fn electrochemical_potential(c: f64, c_ref: f64, z: f64, phi: f64, t: f64) -> f64 {
    phi + thermal_voltage(t) / z * (c / c_ref).ln()
}

/// Momentum and energy relaxation times `(tau_p, tau_w)`.
pub fn relaxation_times(s: &SpeciesParams, t_ion: f64, t_fluid: f64) -> (f64, f64) {
    let tau_p = s.mass * s.mobility * t_fluid / (Q * t_ion);
    let tau_w = 1.5 * s.mobility * K_B * t_ion * t_fluid / (Q * s.v_sat * s.v_sat * (t_ion + t_fluid)) + 0.5 * tau_p;
    (tau_p, tau_w)
}

/// Momentum-relaxation mobility `q tau_p / m = mu_0 T_e / T_ion`.
#[inline]
pub fn relaxation_mobility(s: &SpeciesParams, t_ion: f64, t_fluid: f64) -> f64 {
    s.mobility * t_fluid / t_ion
}

/// Ion thermal conductivity `(3/2) mu_0 k_B^2 T_e c / q`.
#[inline]
pub fn ion_thermal_conductivity(mobility: f64, t_fluid: f64, c: f64) -> f64 {
    1.5 * mobility * K_B * K_B * t_fluid * c / Q
}

/// Energy per particle `m v^2 / 2 + 3 k_B T / 2`.
#[inline]
pub fn carrier_energy(mass: f64, v: f64, t: f64) -> f64 {
    0.5 * mass * v * v + 1.5 * K_B * t
}

/// Mean particle velocity `z J / (q c)`: a positive current moves cations
/// forward and anions backward.
#[inline]
pub fn drift_velocity(z: f64, j: f64, c: f64) -> f64 {
    z.signum() * j / (Q * z.abs() * c)
}

/// Molar concentration (mol/L) to number density (1/m^3).
#[inline]
pub fn molar_to_number_density(molar: f64) -> f64 {
    molar * 1e3 * N_A
}

#[inline]
pub fn number_density_to_molar(c: f64) -> f64 {
    c / (1e3 * N_A)
}
