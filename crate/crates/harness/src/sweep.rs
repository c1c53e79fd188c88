//! Parameter sweeps over applied voltage, bath temperatures and fluid velocity.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thermoflux_core::channel::VelocityProfile;
use thermoflux_core::gummel::{run_gummel, GummelRun};
use thermoflux_core::models::FieldState;

use crate::config::ChannelConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    VApp,
    TLeft,
    TRight,
    TBoth,
    VE,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::VApp => "v_app",
            SweepVariable::TLeft => "t_left",
            SweepVariable::TRight => "t_right",
            SweepVariable::TBoth => "t_both",
            SweepVariable::VE => "v_e",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "v_app" | "vapp" | "voltage" => Ok(SweepVariable::VApp),
            "t_left" | "t0" => Ok(SweepVariable::TLeft),
            "t_right" | "td" => Ok(SweepVariable::TRight),
            "t_both" | "t" => Ok(SweepVariable::TBoth),
            "v_e" | "ve" => Ok(SweepVariable::VE),
            other => Err(format!(
                "unknown sweep variable {other:?} (expected v_app, t_left, t_right, t_both or v_e)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, values: Vec<f64>) -> Result<Self, String> {
        if values.is_empty() {
            return Err("a sweep needs at least one value".into());
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err("sweep values must be finite".into());
        }
        Ok(SweepSpec { variable, values })
    }

    /// `n` evenly spaced values from `start` to `stop` inclusive.
    pub fn linspace(variable: SweepVariable, start: f64, stop: f64, n: usize) -> Result<Self, String> {
        let values = match n {
            0 => Vec::new(),
            1 => vec![start],
            _ => (0..n)
                .map(|k| start + (stop - start) * k as f64 / (n - 1) as f64)
                .collect(),
        };
        SweepSpec::new(variable, values)
    }
}

/// Returns a copy of `config` with the sweep variable set to `value`.
pub fn apply(config: &ChannelConfig, variable: SweepVariable, value: f64) -> ChannelConfig {
    let mut c = config.clone();
    let ch = &mut c.channel;
    match variable {
        SweepVariable::VApp => ch.bath.phi_left = ch.bath.phi_right + value,
        SweepVariable::TLeft => ch.bath.t_left = value,
        SweepVariable::TRight => ch.bath.t_right = value,
        SweepVariable::TBoth => {
            ch.bath.t_left = value;
            ch.bath.t_right = value;
            ch.medium.temperature = value;
        }
        SweepVariable::VE => ch.velocity = VelocityProfile::Constant(value),
    }
    c
}

/// One sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct IvRow {
    pub sweep_value: f64,
    /// Total current `A (J_p + J_n)`, A.
    pub current: f64,
    pub j_p: f64,
    pub j_n: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Set when the point failed with a solver error.
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub rows: Vec<IvRow>,
    /// Final state of each point, if the solver produced one.
    pub states: Vec<Option<FieldState>>,
}

fn row(config: &ChannelConfig, value: f64, run: &Result<GummelRun, thermoflux_core::Error>) -> IvRow {
    match run {
        Ok(r) => IvRow {
            sweep_value: value,
            current: r.total_current(&config.channel),
            j_p: r.state.current_density(0),
            j_n: r.state.current_density(1),
            iterations: r.trace.len(),
            converged: r.converged,
            error: None,
        },
        Err(e) => IvRow {
            sweep_value: value,
            current: f64::NAN,
            j_p: f64::NAN,
            j_n: f64::NAN,
            iterations: 0,
            converged: false,
            error: Some(e.to_string()),
        },
    }
}

/// Runs a sweep. Sequential runs warm-start each point from the previous
/// converged state; parallel runs cold-start every point.
pub fn run_sweep(config: &ChannelConfig, spec: &SweepSpec, parallel: bool) -> SweepResult {
    let solve = |value: f64, init: Option<FieldState>| {
        let c = apply(config, spec.variable, value);
        let run = run_gummel(&c.channel, c.model, c.solver, init);
        (row(&c, value, &run), run.ok().map(|r| (r.state, r.converged)))
    };
    let results: Vec<(IvRow, Option<(FieldState, bool)>)> = if parallel {
        spec.values.par_iter().map(|&v| solve(v, None)).collect()
    } else {
        let mut out = Vec::with_capacity(spec.values.len());
        let mut warm: Option<FieldState> = None;
        for &v in &spec.values {
            let (r, s) = solve(v, warm.take());
            warm = match &s {
                Some((state, true)) => Some(state.clone()),
                _ => None,
            };
            out.push((r, s));
        }
        out
    };
    let (rows, states) = results.into_iter().map(|(r, s)| (r, s.map(|(st, _)| st))).unzip();
    SweepResult {
        spec: spec.clone(),
        rows,
        states,
    }
}
