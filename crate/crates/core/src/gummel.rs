//! Decoupled fixed-point iteration: nonlinear Poisson, continuity, energy
//! balances, then the electrochemical potentials, until the update of
//! `[phi, phi_p, phi_n, T_p, T_n, T_e]` falls below tolerance.

use crate::boundary::BoundaryData;
use crate::channel::Channel;
use crate::dmh::{solve_bvp, BvpCoefficients, DmhOptions, DmhSolution, Lumping, Mesh};
use crate::error::{Error, Result};
use crate::models::{FieldState, ModelContext, ModelKind};
use crate::numerics::Stabilization;
use crate::physics::{drift_velocity, electrochemical_potential, mb_concentration, thermal_voltage, Q};
use crate::poisson::{solve_nonlinear_poisson, FrozenSpecies, NewtonOptions, PoissonProblem};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GummelOptions {
    /// Stop when the scaled update drops below this value.
    pub toll: f64,
    pub max_iters: usize,
    /// Under-relaxation of the temperature updates.
    pub relaxation: f64,
}

impl Default for GummelOptions {
    fn default() -> Self {
        GummelOptions {
            toll: 1e-6,
            max_iters: 400,
            relaxation: 0.7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    pub n_el: usize,
    pub stabilization: Stabilization,
    pub lumping: Lumping,
    pub gummel: GummelOptions,
    pub newton: NewtonOptions,
    pub inertia: bool,
    pub fluid_exchange_sign: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            n_el: 200,
            stabilization: Stabilization::ScharfetterGummel,
            lumping: Lumping::Auto,
            gummel: GummelOptions::default(),
            newton: NewtonOptions::default(),
            inertia: true,
            fluid_exchange_sign: 1.0,
        }
    }
}

/// Diagnostics of one Gummel sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GummelIteration {
    pub index: usize,
    /// Scaled updates of `[phi, phi_p, phi_n, T_p, T_n, T_e]`.
    pub update: [f64; 6],
    pub newton_iterations: usize,
    pub peclet_continuity: f64,
    pub peclet_energy: f64,
}

impl GummelIteration {
    pub fn max_update(&self) -> f64 {
        self.update.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_peclet(&self) -> f64 {
        self.peclet_continuity.max(self.peclet_energy)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GummelTrace {
    pub iterations: Vec<GummelIteration>,
}

impl GummelTrace {
    pub fn len(&self) -> usize {
        self.iterations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterations.is_empty()
    }

    pub fn last(&self) -> Option<&GummelIteration> {
        self.iterations.last()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GummelRun {
    pub state: FieldState,
    pub trace: GummelTrace,
    pub converged: bool,
}

impl GummelRun {
    /// Total current `A (J_p + J_n)`, amperes.
    pub fn total_current(&self, channel: &Channel) -> f64 {
        channel.area * self.state.total_current_density()
    }
}

/// A channel, a model, and discretization settings, with everything derived from them.
#[derive(Debug, Clone)]
pub struct Simulation<'a> {
    pub channel: &'a Channel,
    pub model: ModelKind,
    pub settings: SolverSettings,
    pub mesh: Mesh<f64>,
    pub boundary: BoundaryData,
    fixed_charge: Vec<f64>,
    velocity: Vec<f64>,
}

#[inline]
fn z(i: usize) -> f64 {
    if i == 0 {
        1.0
    } else {
        -1.0
    }
}

fn elem_avg(v: &[f64]) -> Vec<f64> {
    v.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}

fn linear(a: f64, b: f64, x: &[f64]) -> Vec<f64> {
    let (x0, x1) = (x[0], x[x.len() - 1]);
    x.iter().map(|&s| a + (b - a) * (s - x0) / (x1 - x0)).collect()
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

impl<'a> Simulation<'a> {
    pub fn new(channel: &'a Channel, model: ModelKind, settings: SolverSettings) -> Result<Self> {
        channel.validate()?;
        if !(settings.gummel.relaxation > 0.0 && settings.gummel.relaxation <= 1.0) {
            return Err(Error::InvalidParameter("relaxation must lie in (0, 1]".into()));
        }
        let mesh = channel.mesh(settings.n_el)?;
        let boundary = channel.boundary_data()?;
        let fixed_charge = channel.charge.profile.element_averages(&mesh);
        let velocity = channel.velocity.element_values(&mesh);
        Ok(Simulation {
            channel,
            model,
            settings,
            mesh,
            boundary,
            fixed_charge,
            velocity,
        })
    }

    pub fn fixed_charge(&self) -> &[f64] {
        &self.fixed_charge
    }

    pub fn context(&self) -> ModelContext<'_> {
        ModelContext {
            mesh: &self.mesh,
            channel: self.channel,
            boundary: &self.boundary,
            model: self.model,
            inertia: self.settings.inertia,
            fluid_exchange_sign: self.settings.fluid_exchange_sign,
        }
    }

    fn dmh_options(&self) -> DmhOptions {
        DmhOptions::new(self.settings.stabilization, self.settings.lumping)
    }

    /// Linear potentials and temperatures between the contacts, with the
    /// interior potential at local electroneutrality.
    pub fn initial_guess(&self) -> FieldState {
        let x = self.mesh.nodes().to_vec();
        let n = x.len();
        let bc = &self.boundary;
        let c_ref = bc.c_ref;
        let t = linear(bc.temperature[0], bc.temperature[1], &x);
        let phi_ec = [
            linear(bc.phi_ec[0][0], bc.phi_ec[1][0], &x),
            linear(bc.phi_ec[0][1], bc.phi_ec[1][1], &x),
        ];
        let mut phi = vec![0.0; n];
        for m in 0..n {
            phi[m] = if m == 0 {
                bc.phi[0]
            } else if m == n - 1 {
                bc.phi[1]
            } else {
                let p = 0.5 * (self.fixed_charge[m - 1] + self.fixed_charge[m]);
                let ec = 0.5 * (phi_ec[0][m] + phi_ec[1][m]);
                ec + thermal_voltage(t[m]) * (p / (2.0 * c_ref)).asinh()
            };
        }
        let conc = [0, 1].map(|i| {
            (0..n)
                .map(|m| {
                    if m == 0 || m == n - 1 {
                        bc.conc[if m == 0 { 0 } else { 1 }][i]
                    } else {
                        mb_concentration(c_ref, z(i), phi[m], phi_ec[i][m], t[m])
                    }
                })
                .collect::<Vec<f64>>()
        });
        let n_el = n - 1;
        FieldState {
            phi_elem: elem_avg(&phi),
            e_field: vec![0.0; n],
            phi,
            conc,
            phi_ec,
            t_ion: [t.clone(), t.clone()],
            t_fluid: t,
            current: [vec![0.0; n_el], vec![0.0; n_el]],
            ion_energy_flux: [vec![0.0; n_el], vec![0.0; n_el]],
            fluid_energy_flux: vec![0.0; n_el],
            v_e: self.velocity.clone(),
            x,
        }
    }

    pub fn poisson_problem(&self, state: &FieldState) -> PoissonProblem<'_> {
        let species = (0..2)
            .map(|i| FrozenSpecies {
                valence: z(i),
                phi_ec: elem_avg(&state.phi_ec[i]),
                temperature: elem_avg(&state.t_ion[i]),
            })
            .collect();
        PoissonProblem {
            mesh: &self.mesh,
            permittivity: self.channel.medium.permittivity,
            fixed_charge: &self.fixed_charge,
            species,
            c_ref: self.boundary.c_ref,
            boundary: self.boundary.phi,
            reference_temperature: self.channel.medium.temperature,
        }
    }

    fn solve_block(&self, coeffs: &BvpCoefficients<f64>, what: &str) -> Result<DmhSolution<f64>> {
        let sol = solve_bvp(&self.mesh, coeffs, self.dmh_options())?;
        if let Some(m) = sol.lambda.iter().position(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(Error::NonPhysical(format!(
                "{what} is {:.3e} at node {m}",
                sol.lambda[m]
            )));
        }
        Ok(sol)
    }

    fn relax(&self, old: &[f64], new: &[f64]) -> Vec<f64> {
        let w = self.settings.gummel.relaxation;
        old.iter().zip(new).map(|(a, b)| a + w * (b - a)).collect()
    }

    /// One Gummel sweep.
    pub fn step(&self, state: &FieldState, index: usize) -> Result<(FieldState, GummelIteration)> {
        let ctx = self.context();
        let c_ref = self.boundary.c_ref;
        let poisson = solve_nonlinear_poisson(
            &self.poisson_problem(state),
            (&state.phi, &state.phi_elem),
            &self.settings.newton,
        )?;
        let mut next = state.clone();
        next.phi = poisson.phi;
        next.phi_elem = poisson.phi_elem;
        next.e_field = poisson.e_nodal;

        let mut pe_cont: f64 = 0.0;
        for i in 0..2 {
            let coeffs = ctx.continuity_coefficients(&next, i)?;
            pe_cont = pe_cont.max(coeffs.max_peclet(&self.mesh));
            let name = if i == 0 {
                "cation concentration"
            } else {
                "anion concentration"
            };
            let sol = self.solve_block(&coeffs, name)?;
            next.current[i] = sol.element_flux_mean().into_iter().map(|j| z(i) * j).collect();
            next.conc[i] = sol.lambda;
        }

        let mut pe_energy: f64 = 0.0;
        match self.model {
            ModelKind::Pnp => {}
            ModelKind::Et => {
                let coeffs = ctx.et_energy_coefficients(&next)?;
                pe_energy = coeffs.max_peclet(&self.mesh);
                let sol = self.solve_block(&coeffs, "temperature")?;
                let t = self.relax(&next.t_fluid, &sol.lambda);
                next.fluid_energy_flux = sol.element_flux_mean();
                next.t_ion = [t.clone(), t.clone()];
                next.t_fluid = t;
            }
            ModelKind::Thd => {
                for i in 0..2 {
                    let coeffs = ctx.ion_energy_coefficients(&next, i)?;
                    pe_energy = pe_energy.max(coeffs.max_peclet(&self.mesh));
                    let name = if i == 0 {
                        "cation temperature"
                    } else {
                        "anion temperature"
                    };
                    let sol = self.solve_block(&coeffs, name)?;
                    let s = self.channel.species()[i];
                    let j = next.current_density(i);
                    let gamma = z(i) * j / Q;
                    next.ion_energy_flux[i] = sol
                        .element_flux_mean()
                        .into_iter()
                        .zip(elem_avg(&next.conc[i]))
                        .map(|(f, c)| {
                            let v = drift_velocity(z(i), j, c);
                            f + gamma * 0.5 * s.mass * v * v
                        })
                        .collect();
                    next.t_ion[i] = self.relax(&next.t_ion[i], &sol.lambda);
                }
                let coeffs = ctx.fluid_energy_coefficients(&next)?;
                pe_energy = pe_energy.max(coeffs.max_peclet(&self.mesh));
                let sol = self.solve_block(&coeffs, "fluid temperature")?;
                let med = &self.channel.medium;
                next.fluid_energy_flux = sol
                    .element_flux_mean()
                    .into_iter()
                    .zip(&next.v_e)
                    .map(|(f, &v)| f + med.number_density * v * 0.5 * med.particle_mass * v * v)
                    .collect();
                next.t_fluid = self.relax(&next.t_fluid, &sol.lambda);
            }
        }

        for i in 0..2 {
            next.phi_ec[i] = (0..next.n_nodes())
                .map(|m| electrochemical_potential(next.conc[i][m], c_ref, z(i), next.phi[m], next.t_ion[i][m]))
                .collect();
        }

        let vth = thermal_voltage(self.channel.medium.temperature);
        let t_sys = self.channel.medium.temperature;
        let update = [
            sup_diff(&next.phi, &state.phi) / vth,
            sup_diff(&next.phi_ec[0], &state.phi_ec[0]) / vth,
            sup_diff(&next.phi_ec[1], &state.phi_ec[1]) / vth,
            sup_diff(&next.t_ion[0], &state.t_ion[0]) / t_sys,
            sup_diff(&next.t_ion[1], &state.t_ion[1]) / t_sys,
            sup_diff(&next.t_fluid, &state.t_fluid) / t_sys,
        ];
        if !next.is_positive() {
            return Err(Error::NonPhysical("nonpositive concentration or temperature".into()));
        }
        Ok((
            next,
            GummelIteration {
                index,
                update,
                newton_iterations: poisson.iterations,
                peclet_continuity: pe_cont,
                peclet_energy: pe_energy,
            },
        ))
    }

    /// Iterates from `init` (or the automatic guess) until convergence or the iteration cap.
    pub fn run(&self, init: Option<FieldState>) -> Result<GummelRun> {
        let mut state = match init {
            Some(mut s) => {
                if s.n_nodes() != self.mesh.n_nodes() {
                    return Err(Error::InvalidParameter("initial state does not match the mesh".into()));
                }
                s.impose_boundary(&self.boundary);
                s.v_e = self.velocity.clone();
                if self.model == ModelKind::Pnp {
                    let t = linear(self.boundary.temperature[0], self.boundary.temperature[1], &s.x);
                    s.t_ion = [t.clone(), t.clone()];
                    s.t_fluid = t;
                }
                s
            }
            None => self.initial_guess(),
        };
        let mut trace = GummelTrace::default();
        for it in 1..=self.settings.gummel.max_iters {
            let (next, rec) = self.step(&state, it)?;
            state = next;
            trace.iterations.push(rec);
            if rec.max_update() < self.settings.gummel.toll {
                return Ok(GummelRun {
                    state,
                    trace,
                    converged: true,
                });
            }
        }
        Ok(GummelRun {
            state,
            trace,
            converged: false,
        })
    }
}

/// Convenience wrapper around [`Simulation::run`].
pub fn run_gummel(
    channel: &Channel,
    model: ModelKind,
    settings: SolverSettings,
    init: Option<FieldState>,
) -> Result<GummelRun> {
    Simulation::new(channel, model, settings)?.run(init)
}
