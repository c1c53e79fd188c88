//! Transport models and the linear BVP coefficients of each Gummel block.
//!
//! Species index 0 is the cation (`p`), index 1 the anion (`n`). For a
//! concentration `c` the BVP flux is `z J` with `J` the electric current
//! density of the species, so `D = q D_i` and `v = z q mu_i E_i`, where the
//! effective field is
//!
//! ```text
//! E_i = E + z v_e / mu_i - z d(k_B T_i / q)/dx  [- z (m_i / q) v_i v_i']
//! ```
//!
//! and the bracketed inertial term is used by the thermo-hydrodynamic model
//! only, lagged one Gummel iteration.

use crate::boundary::BoundaryData;
use crate::channel::Channel;
use crate::dmh::{BvpCoefficients, ElementCoefficients, Mesh};
use crate::error::Result;
use crate::physics::{
    drift_velocity, ion_thermal_conductivity, relaxation_mobility, relaxation_times, thermal_voltage, K_B, Q,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Isothermal drift-diffusion.
    Pnp,
    /// One temperature shared by ions and fluid.
    Et,
    /// Separate ion and fluid temperatures with momentum and energy relaxation.
    Thd,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Pnp => "vpnp",
            ModelKind::Et => "vet",
            ModelKind::Thd => "vthd",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "vpnp" | "pnp" => Ok(ModelKind::Pnp),
            "vet" | "et" => Ok(ModelKind::Et),
            "vthd" | "thd" => Ok(ModelKind::Thd),
            other => Err(format!("unknown model '{other}' (expected vpnp, vet or vthd)")),
        }
    }
}

/// Discrete fields. Nodal unless marked per element.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub x: Vec<f64>,
    pub phi: Vec<f64>,
    /// Element values of the potential from the mixed Poisson solve.
    pub phi_elem: Vec<f64>,
    pub e_field: Vec<f64>,
    /// `[cation, anion]` concentrations.
    pub conc: [Vec<f64>; 2],
    pub phi_ec: [Vec<f64>; 2],
    pub t_ion: [Vec<f64>; 2],
    pub t_fluid: Vec<f64>,
    /// Electric current density per species, per element.
    pub current: [Vec<f64>; 2],
    /// Ion energy flux per element.
    pub ion_energy_flux: [Vec<f64>; 2],
    /// Fluid (or shared) energy flux per element.
    pub fluid_energy_flux: Vec<f64>,
    /// Electrolyte velocity per element.
    pub v_e: Vec<f64>,
}

impl FieldState {
    pub fn n_nodes(&self) -> usize {
        self.x.len()
    }

    pub fn p(&self) -> &[f64] {
        &self.conc[0]
    }

    pub fn n(&self) -> &[f64] {
        &self.conc[1]
    }

    /// Mean current density of species `i` over the elements.
    pub fn current_density(&self, i: usize) -> f64 {
        let c = &self.current[i];
        c.iter().sum::<f64>() / c.len() as f64
    }

    pub fn total_current_density(&self) -> f64 {
        self.current_density(0) + self.current_density(1)
    }

    /// Nodal mean velocity of species `i`.
    pub fn velocity(&self, i: usize) -> Vec<f64> {
        let z = if i == 0 { 1.0 } else { -1.0 };
        let j = self.current_density(i);
        self.conc[i].iter().map(|&c| drift_velocity(z, j, c)).collect()
    }

    /// Overwrites the end values with the Dirichlet data.
    pub fn impose_boundary(&mut self, bc: &BoundaryData) {
        let last = self.n_nodes() - 1;
        for (side, idx) in [(0, 0), (1, last)] {
            self.phi[idx] = bc.phi[side];
            for i in 0..2 {
                self.conc[i][idx] = bc.conc[side][i];
                self.phi_ec[i][idx] = bc.phi_ec[side][i];
                self.t_ion[i][idx] = bc.temperature[side];
            }
            self.t_fluid[idx] = bc.temperature[side];
        }
    }

    pub fn is_positive(&self) -> bool {
        self.conc
            .iter()
            .chain(self.t_ion.iter())
            .chain(std::iter::once(&self.t_fluid))
            .all(|v| v.iter().all(|&x| x > 0.0 && x.is_finite()))
    }
}

/// Shared inputs of the coefficient builders.
#[derive(Debug, Clone, Copy)]
pub struct ModelContext<'a> {
    pub mesh: &'a Mesh<f64>,
    pub channel: &'a Channel,
    pub boundary: &'a BoundaryData,
    pub model: ModelKind,
    /// Include the lagged inertial term of the thermo-hydrodynamic momentum balance.
    pub inertia: bool,
    /// Sign of the ion-to-fluid energy exchange; `+1` transfers relaxed ion energy to the fluid.
    pub fluid_exchange_sign: f64,
}

#[inline]
fn avg(v: &[f64], k: usize) -> f64 {
    0.5 * (v[k] + v[k + 1])
}

#[inline]
fn valence(i: usize) -> f64 {
    if i == 0 {
        1.0
    } else {
        -1.0
    }
}

impl ModelContext<'_> {
    fn species(&self, i: usize) -> &crate::physics::SpeciesParams {
        self.channel.species()[i]
    }

    /// Mobility of species `i` on element `k`.
    pub fn mobility(&self, state: &FieldState, i: usize, k: usize) -> f64 {
        let s = self.species(i);
        match self.model {
            ModelKind::Pnp | ModelKind::Et => s.mobility,
            ModelKind::Thd => relaxation_mobility(s, avg(&state.t_ion[i], k), avg(&state.t_fluid, k)),
        }
    }

    /// Continuity block: unknown is the concentration of species `i`.
    pub fn continuity_coefficients(&self, state: &FieldState, i: usize) -> Result<BvpCoefficients<f64>> {
        let mesh = self.mesh;
        let z = valence(i);
        let s = self.species(i);
        let t = &state.t_ion[i];
        let lagged = if self.model == ModelKind::Thd && self.inertia {
            Some(state.velocity(i))
        } else {
            None
        };
        let elements = (0..mesh.n_elements())
            .map(|k| {
                let h = mesh.h(k);
                let mu = self.mobility(state, i, k);
                let diffusion = mu * thermal_voltage(avg(t, k));
                let e = -(state.phi[k + 1] - state.phi[k]) / h;
                let thermo = -z * (thermal_voltage(t[k + 1]) - thermal_voltage(t[k])) / h;
                let drag = z * state.v_e[k] / mu;
                let inertial = match &lagged {
                    Some(v) => -z * (s.mass / Q) * avg(v, k) * (v[k + 1] - v[k]) / h,
                    None => 0.0,
                };
                ElementCoefficients {
                    diffusion: Q * diffusion,
                    advection: z * Q * mu * (e + drag + thermo + inertial),
                    reaction: 0.0,
                    source: 0.0,
                }
            })
            .collect();
        BvpCoefficients::new(elements, self.boundary.conc[0][i], self.boundary.conc[1][i])
    }

    /// Ion energy block of the thermo-hydrodynamic model: unknown `T_i`.
    ///
    /// The drift kinetic energy enters through the relaxation term and the
    /// divergence of its convective flux, both from the current iterate.
    pub fn ion_energy_coefficients(&self, state: &FieldState, i: usize) -> Result<BvpCoefficients<f64>> {
        let mesh = self.mesh;
        let z = valence(i);
        let s = self.species(i);
        let c = &state.conc[i];
        let j = state.current_density(i);
        let gamma = z * j / Q;
        let v = state.velocity(i);
        let kin: Vec<f64> = v.iter().map(|&v| 0.5 * s.mass * v * v).collect();
        let elements = (0..mesh.n_elements())
            .map(|k| {
                let h = mesh.h(k);
                let ck = avg(c, k);
                let te = avg(&state.t_fluid, k);
                let ti = avg(&state.t_ion[i], k);
                let (_, tau_w) = relaxation_times(s, ti, te);
                let vk = drift_velocity(z, j, ck);
                let kk = 0.5 * s.mass * vk * vk;
                let e = -(state.phi[k + 1] - state.phi[k]) / h;
                ElementCoefficients {
                    diffusion: ion_thermal_conductivity(s.mobility, te, ck),
                    advection: 2.5 * K_B * gamma,
                    reaction: 1.5 * K_B * ck / tau_w,
                    source: e * state.current[i][k] + ck / tau_w * (1.5 * K_B * te - kk)
                        - gamma * (kin[k + 1] - kin[k]) / h,
                }
            })
            .collect();
        let tb = self.boundary.temperature;
        BvpCoefficients::new(elements, tb[0], tb[1])
    }

    /// Fluid energy block of the thermo-hydrodynamic model: unknown `T_e`.
    pub fn fluid_energy_coefficients(&self, state: &FieldState) -> Result<BvpCoefficients<f64>> {
        let mesh = self.mesh;
        let med = &self.channel.medium;
        let n = mesh.n_elements();
        // convective flux of the fluid's kinetic energy, at nodes
        let ke: Vec<f64> = state
            .v_e
            .iter()
            .map(|&v| med.number_density * v * 0.5 * med.particle_mass * v * v)
            .collect();
        let ke_nodal: Vec<f64> = (0..=n)
            .map(|m| match m {
                0 => ke[0],
                m if m == n => ke[n - 1],
                m => 0.5 * (ke[m - 1] + ke[m]),
            })
            .collect();
        let elements = (0..n)
            .map(|k| {
                let h = mesh.h(k);
                let te = avg(&state.t_fluid, k);
                let mut rate = 0.0;
                let mut gain = 0.0;
                for i in 0..2 {
                    let s = self.species(i);
                    let ck = avg(&state.conc[i], k);
                    let ti = avg(&state.t_ion[i], k);
                    let (_, tau_w) = relaxation_times(s, ti, te);
                    let vk = drift_velocity(valence(i), state.current_density(i), ck);
                    let w = 0.5 * s.mass * vk * vk + 1.5 * K_B * ti;
                    rate += ck / tau_w;
                    gain += ck / tau_w * w;
                }
                let dke = (ke_nodal[k + 1] - ke_nodal[k]) / h;
                let (reaction, source) = if self.fluid_exchange_sign >= 0.0 {
                    (1.5 * K_B * rate, gain - dke)
                } else {
                    // reversed exchange is not monotone in T_e; keep it fully lagged
                    (0.0, -(gain - 1.5 * K_B * rate * te) - dke)
                };
                ElementCoefficients {
                    diffusion: med.thermal_conductivity,
                    advection: 1.5 * K_B * med.number_density * state.v_e[k],
                    reaction,
                    source,
                }
            })
            .collect();
        let tb = self.boundary.temperature;
        BvpCoefficients::new(elements, tb[0], tb[1])
    }

    /// Shared-temperature energy block of the energy-transport model.
    pub fn et_energy_coefficients(&self, state: &FieldState) -> Result<BvpCoefficients<f64>> {
        let mesh = self.mesh;
        let med = &self.channel.medium;
        let jp = state.current_density(0);
        let jn = state.current_density(1);
        let elements = (0..mesh.n_elements())
            .map(|k| {
                let h = mesh.h(k);
                let t = avg(&state.t_fluid, k);
                let kappa = med.thermal_conductivity
                    + (0..2)
                        .map(|i| ion_thermal_conductivity(self.species(i).mobility, t, avg(&state.conc[i], k)))
                        .sum::<f64>();
                let e = -(state.phi[k + 1] - state.phi[k]) / h;
                ElementCoefficients {
                    diffusion: kappa,
                    advection: 1.5 * K_B * med.number_density * state.v_e[k] + 2.5 * K_B / Q * (jp - jn),
                    reaction: 0.0,
                    source: e * (state.current[0][k] + state.current[1][k]),
                }
            })
            .collect();
        let tb = self.boundary.temperature;
        BvpCoefficients::new(elements, tb[0], tb[1])
    }
}

/// Distance of a state from thermodynamic equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumReport {
    /// Largest species current relative to `q c_ref mu_0 V_th / d`.
    pub current: f64,
    /// Largest spread of an electrochemical potential, in thermal voltages.
    pub phi_ec_spread: f64,
    /// Largest relative temperature deviation from the system temperature.
    pub temperature: f64,
    pub passed: bool,
}

pub fn equilibrium_check(channel: &Channel, state: &FieldState, tol: f64) -> EquilibriumReport {
    let t_sys = channel.medium.temperature;
    let vth = thermal_voltage(t_sys);
    let mu = channel.cation.mobility.max(channel.anion.mobility);
    let j0 = Q * channel.bath.c_ref() * mu * vth / channel.length;
    let current = (0..2)
        .flat_map(|i| state.current[i].iter())
        .fold(0.0_f64, |a, &j| a.max(j.abs()))
        / j0;
    let phi_ec_spread = state
        .phi_ec
        .iter()
        .map(|v| {
            let (lo, hi) = v
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
            (hi - lo) / vth
        })
        .fold(0.0, f64::max);
    let temperature = state
        .t_ion
        .iter()
        .chain(std::iter::once(&state.t_fluid))
        .flat_map(|v| v.iter())
        .fold(0.0_f64, |a, &t| a.max((t - t_sys).abs() / t_sys));
    EquilibriumReport {
        current,
        phi_ec_spread,
        temperature,
        passed: current <= tol && phi_ec_spread <= tol && temperature <= tol,
    }
}
