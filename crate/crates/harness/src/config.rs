//! Channel configuration files.
//!
//! A configuration is a TOML document with `geometry`, `charge`, `species`,
//! `medium`, `baths`, `electrolyte` and `solver` sections. Dimensional
//! fields take either a bare number in SI units or a string such as
//! `"2.5 nm"` or `"0.1 M"`; everything is converted to SI on load.

use std::path::Path;

use serde::Deserialize;
use thermoflux_core::boundary::BathConditions;
use thermoflux_core::channel::{Channel, ChargeProfile, PiecewiseProfile, Segment, VelocityProfile};
use thermoflux_core::dmh::Lumping;
use thermoflux_core::gummel::{GummelOptions, SolverSettings};
use thermoflux_core::models::ModelKind;
use thermoflux_core::physics::{MediumParams, SpeciesParams, EPS_0};
use thermoflux_core::Stabilization;

use crate::units::{parse_quantity, Dimension};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("syntax error: {0}")]
    Parse(String),
    #[error("{path}: {reason}")]
    Invalid { path: String, reason: String },
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
}

fn invalid(path: impl Into<String>, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        path: path.into(),
        reason: reason.into(),
    }
}

/// A dimensional value as written in the file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum RawQuantity {
    Number(f64),
    Text(String),
}

impl RawQuantity {
    fn si(&self, dim: Dimension, path: &str) -> Result<f64, ConfigError> {
        match self {
            RawQuantity::Number(v) if v.is_finite() => Ok(*v),
            RawQuantity::Number(_) => Err(invalid(path, "value is not finite")),
            RawQuantity::Text(s) => parse_quantity(s, dim).map_err(|e| invalid(path, e)),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub model: Option<String>,
    pub geometry: RawGeometry,
    pub charge: RawCharge,
    pub species: Vec<RawSpecies>,
    pub medium: RawMedium,
    pub baths: RawBaths,
    #[serde(default)]
    pub electrolyte: Option<RawElectrolyte>,
    #[serde(default)]
    pub solver: Option<RawSolver>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGeometry {
    pub length: RawQuantity,
    pub area: RawQuantity,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSegment {
    pub start: RawQuantity,
    pub end: RawQuantity,
    pub value: RawQuantity,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCharge {
    #[serde(default)]
    pub segments: Vec<RawSegment>,
    #[serde(default)]
    pub mouth_left: Option<RawQuantity>,
    #[serde(default)]
    pub mouth_right: Option<RawQuantity>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpecies {
    pub name: String,
    pub valence: i32,
    pub mobility: RawQuantity,
    pub mass: RawQuantity,
    #[serde(default)]
    pub v_sat: Option<RawQuantity>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMedium {
    pub relative_permittivity: f64,
    pub thermal_conductivity: RawQuantity,
    pub number_density: RawQuantity,
    pub particle_mass: RawQuantity,
    #[serde(default)]
    pub temperature: Option<RawQuantity>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBaths {
    #[serde(default)]
    pub v_app: Option<RawQuantity>,
    #[serde(default)]
    pub phi_right: Option<RawQuantity>,
    /// Salt concentration shared by every species at both ends.
    #[serde(default)]
    pub concentration: Option<RawQuantity>,
    /// Per-species concentrations, in the order of the species list.
    #[serde(default)]
    pub left: Option<Vec<RawQuantity>>,
    #[serde(default)]
    pub right: Option<Vec<RawQuantity>>,
    #[serde(default)]
    pub t_left: Option<RawQuantity>,
    #[serde(default)]
    pub t_right: Option<RawQuantity>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawElectrolyte {
    #[serde(default)]
    pub velocity: Option<RawQuantity>,
    #[serde(default)]
    pub segments: Option<Vec<RawSegment>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSolver {
    pub n_el: Option<usize>,
    pub stabilization: Option<String>,
    pub lumping: Option<String>,
    pub toll: Option<f64>,
    pub max_iters: Option<usize>,
    pub relaxation: Option<f64>,
    pub inertia: Option<bool>,
    pub fluid_exchange_sign: Option<f64>,
}

/// A validated run description in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelConfig {
    pub name: String,
    pub channel: Channel,
    pub model: ModelKind,
    pub solver: SolverSettings,
}

pub fn parse_stabilization(s: &str) -> Option<Stabilization> {
    match s.to_ascii_lowercase().as_str() {
        "none" | "off" => Some(Stabilization::None),
        "up" | "upwind" => Some(Stabilization::Upwind),
        "sg" | "scharfetter-gummel" => Some(Stabilization::ScharfetterGummel),
        _ => None,
    }
}

pub fn parse_lumping(s: &str) -> Option<Lumping> {
    match s.to_ascii_lowercase().as_str() {
        "auto" => Some(Lumping::Auto),
        "on" | "true" => Some(Lumping::On),
        "off" | "false" => Some(Lumping::Off),
        _ => None,
    }
}

fn segments(raw: &[RawSegment], path: &str) -> Result<PiecewiseProfile, ConfigError> {
    let mut out = Vec::with_capacity(raw.len());
    for (k, s) in raw.iter().enumerate() {
        let p = format!("{path}[{k}]");
        out.push(Segment {
            start: s.start.si(Dimension::Length, &format!("{p}.start"))?,
            end: s.end.si(Dimension::Length, &format!("{p}.end"))?,
            value: s.value.si(Dimension::Concentration, &format!("{p}.value"))?,
        });
    }
    Ok(PiecewiseProfile { segments: out })
}

fn velocity_segments(raw: &[RawSegment], path: &str) -> Result<PiecewiseProfile, ConfigError> {
    let mut out = Vec::with_capacity(raw.len());
    for (k, s) in raw.iter().enumerate() {
        let p = format!("{path}[{k}]");
        out.push(Segment {
            start: s.start.si(Dimension::Length, &format!("{p}.start"))?,
            end: s.end.si(Dimension::Length, &format!("{p}.end"))?,
            value: s.value.si(Dimension::Velocity, &format!("{p}.value"))?,
        });
    }
    Ok(PiecewiseProfile { segments: out })
}

fn species(raw: &RawSpecies, k: usize) -> Result<SpeciesParams, ConfigError> {
    let p = format!("species[{k}]");
    let s = SpeciesParams {
        name: raw.name.clone(),
        valence: raw.valence,
        mobility: raw.mobility.si(Dimension::Mobility, &format!("{p}.mobility"))?,
        mass: raw.mass.si(Dimension::Mass, &format!("{p}.mass"))?,
        v_sat: match &raw.v_sat {
            Some(v) => v.si(Dimension::Velocity, &format!("{p}.v_sat"))?,
            None => 10.0,
        },
    };
    s.validate().map_err(|e| invalid(p, e.to_string()))?;
    Ok(s)
}

fn bath_list(raw: &RawBaths, list: &Option<Vec<RawQuantity>>, side: &str, n: usize) -> Result<Vec<f64>, ConfigError> {
    let path = format!("baths.{side}");
    match (list, &raw.concentration) {
        (Some(_), Some(_)) => Err(invalid(path, "give either baths.concentration or per-species lists")),
        (Some(v), None) => {
            if v.len() != n {
                return Err(invalid(path, format!("expected {n} concentrations, got {}", v.len())));
            }
            v.iter()
                .enumerate()
                .map(|(k, q)| q.si(Dimension::Concentration, &format!("{path}[{k}]")))
                .collect()
        }
        (None, Some(c)) => Ok(vec![c.si(Dimension::Concentration, "baths.concentration")?; n]),
        (None, None) => Err(invalid(path, "bath concentrations are required")),
    }
}

impl RawConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn resolve(&self) -> Result<ChannelConfig, ConfigError> {
        let length = self.geometry.length.si(Dimension::Length, "geometry.length")?;
        let area = self.geometry.area.si(Dimension::Area, "geometry.area")?;
        if !(length > 0.0) {
            return Err(invalid("geometry.length", "must be positive"));
        }
        if !(area > 0.0) {
            return Err(invalid("geometry.area", "must be positive"));
        }

        if self.species.len() != 2 {
            return Err(invalid("species", "exactly one cation and one anion are required"));
        }
        let sp: Vec<SpeciesParams> = self
            .species
            .iter()
            .enumerate()
            .map(|(k, s)| species(s, k))
            .collect::<Result<_, _>>()?;
        let (ci, ai) = match (sp[0].valence, sp[1].valence) {
            (1, -1) => (0, 1),
            (-1, 1) => (1, 0),
            _ => return Err(invalid("species", "valences must be +1 and -1")),
        };

        let t_sys = match &self.medium.temperature {
            Some(t) => t.si(Dimension::Temperature, "medium.temperature")?,
            None => 300.0,
        };
        let eps_r = self.medium.relative_permittivity;
        if !(eps_r > 0.0) || !eps_r.is_finite() {
            return Err(invalid("medium.relative_permittivity", "must be positive"));
        }
        let medium = MediumParams {
            permittivity: eps_r * EPS_0,
            thermal_conductivity: self
                .medium
                .thermal_conductivity
                .si(Dimension::Conductivity, "medium.thermal_conductivity")?,
            number_density: self
                .medium
                .number_density
                .si(Dimension::Concentration, "medium.number_density")?,
            particle_mass: self.medium.particle_mass.si(Dimension::Mass, "medium.particle_mass")?,
            temperature: t_sys,
        };
        medium.validate().map_err(|e| invalid("medium", e.to_string()))?;

        let b = &self.baths;
        let left = bath_list(b, &b.left, "left", 2)?;
        let right = bath_list(b, &b.right, "right", 2)?;
        for (side, c) in [("left", &left), ("right", &right)] {
            if c.iter().any(|&x| !(x > 0.0)) {
                return Err(invalid(format!("baths.{side}"), "concentrations must be positive"));
            }
            let charge: f64 = sp.iter().zip(c.iter()).map(|(s, &x)| s.z() * x).sum();
            let scale: f64 = c.iter().sum();
            if charge.abs() > 1e-12 * scale {
                return Err(invalid(
                    format!("baths.{side}"),
                    format!("bath electroneutrality violated: net charge {charge:.6e} m^-3"),
                ));
            }
        }
        let opt = |q: &Option<RawQuantity>, dim, path: &str, default: f64| match q {
            Some(v) => v.si(dim, path),
            None => Ok(default),
        };
        let bath = BathConditions {
            phi_left: opt(&b.v_app, Dimension::Voltage, "baths.v_app", 0.0)?,
            phi_right: opt(&b.phi_right, Dimension::Voltage, "baths.phi_right", 0.0)?,
            conc_left: vec![left[ci], left[ai]],
            conc_right: vec![right[ci], right[ai]],
            t_left: opt(&b.t_left, Dimension::Temperature, "baths.t_left", t_sys)?,
            t_right: opt(&b.t_right, Dimension::Temperature, "baths.t_right", t_sys)?,
        };
        if !(bath.t_left > 0.0) || !(bath.t_right > 0.0) {
            return Err(invalid("baths", "bath temperatures must be positive"));
        }

        let profile = segments(&self.charge.segments, "charge.segments")?;
        let mouth = [
            self.charge
                .mouth_left
                .as_ref()
                .map(|q| q.si(Dimension::Concentration, "charge.mouth_left"))
                .transpose()?,
            self.charge
                .mouth_right
                .as_ref()
                .map(|q| q.si(Dimension::Concentration, "charge.mouth_right"))
                .transpose()?,
        ];

        let velocity = match &self.electrolyte {
            None => VelocityProfile::Constant(0.0),
            Some(e) => match (&e.velocity, &e.segments) {
                (Some(_), Some(_)) => return Err(invalid("electrolyte", "give either velocity or segments")),
                (Some(v), None) => VelocityProfile::Constant(v.si(Dimension::Velocity, "electrolyte.velocity")?),
                (None, Some(s)) => VelocityProfile::Piecewise(velocity_segments(s, "electrolyte.segments")?),
                (None, None) => VelocityProfile::Constant(0.0),
            },
        };

        let channel = Channel {
            length,
            area,
            charge: ChargeProfile { profile, mouth },
            cation: sp[ci].clone(),
            anion: sp[ai].clone(),
            medium,
            bath,
            velocity,
        };
        channel.validate().map_err(|e| invalid("channel", e.to_string()))?;

        let model = match &self.model {
            Some(m) => m
                .parse::<ModelKind>()
                .map_err(|_| invalid("model", format!("unknown model {m:?}")))?,
            None => ModelKind::Thd,
        };
        let solver = resolve_solver(self.solver.as_ref().cloned().unwrap_or_default())?;
        Ok(ChannelConfig {
            name: self.name.clone().unwrap_or_else(|| "channel".into()),
            channel,
            model,
            solver,
        })
    }
}

fn resolve_solver(raw: RawSolver) -> Result<SolverSettings, ConfigError> {
    let mut s = SolverSettings::default();
    if let Some(n) = raw.n_el {
        if n < 2 {
            return Err(invalid("solver.n_el", "at least 2 elements are required"));
        }
        s.n_el = n;
    }
    if let Some(st) = raw.stabilization {
        s.stabilization = parse_stabilization(&st)
            .ok_or_else(|| invalid("solver.stabilization", format!("unknown scheme {st:?}")))?;
    }
    if let Some(l) = raw.lumping {
        s.lumping = parse_lumping(&l).ok_or_else(|| invalid("solver.lumping", format!("unknown value {l:?}")))?;
    }
    let mut g = GummelOptions::default();
    if let Some(t) = raw.toll {
        if !(t > 0.0) {
            return Err(invalid("solver.toll", "must be positive"));
        }
        g.toll = t;
    }
    if let Some(m) = raw.max_iters {
        if m == 0 {
            return Err(invalid("solver.max_iters", "must be at least 1"));
        }
        g.max_iters = m;
    }
    if let Some(w) = raw.relaxation {
        if !(w > 0.0 && w <= 1.0) {
            return Err(invalid("solver.relaxation", "must lie in (0, 1]"));
        }
        g.relaxation = w;
    }
    s.gummel = g;
    if let Some(i) = raw.inertia {
        s.inertia = i;
    }
    if let Some(f) = raw.fluid_exchange_sign {
        if f != 1.0 && f != -1.0 {
            return Err(invalid("solver.fluid_exchange_sign", "must be 1 or -1"));
        }
        s.fluid_exchange_sign = f;
    }
    Ok(s)
}

pub fn parse_config(text: &str) -> Result<ChannelConfig, ConfigError> {
    RawConfig::from_toml(text)?.resolve()
}

/// Loads a file path, or a shipped fixture written as `builtin:NAME`.
pub fn load_config(source: &str) -> Result<ChannelConfig, ConfigError> {
    if let Some(name) = source.strip_prefix("builtin:") {
        let text = crate::fixtures::fixture_source(name).ok_or_else(|| ConfigError::UnknownFixture(name.into()))?;
        return parse_config(text);
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: source.into(),
        source: e,
    })?;
    parse_config(&text)
}
