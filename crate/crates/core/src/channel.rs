//! Problem description: geometry, fixed charge, species, fluid, baths.

use crate::boundary::{dirichlet_data, BathConditions, BoundaryData};
use crate::dmh::Mesh;
use crate::error::{Error, Result};
use crate::physics::{MediumParams, SpeciesParams};

/// Constant fixed-charge density (1/m^3, signed) on `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub value: f64,
}

/// Piecewise constant profile, zero outside the listed segments.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PiecewiseProfile {
    pub segments: Vec<Segment>,
}

impl PiecewiseProfile {
    pub fn constant(start: f64, end: f64, value: f64) -> Self {
        PiecewiseProfile {
            segments: vec![Segment { start, end, value }],
        }
    }

    pub fn at(&self, x: f64) -> f64 {
        self.segments
            .iter()
            .filter(|s| x >= s.start && x <= s.end)
            .map(|s| s.value)
            .next()
            .unwrap_or(0.0)
    }

    /// Exact cell averages over the mesh elements.
    pub fn element_averages(&self, mesh: &Mesh<f64>) -> Vec<f64> {
        (0..mesh.n_elements())
            .map(|k| {
                let (a, b) = (mesh.nodes()[k], mesh.nodes()[k + 1]);
                let total: f64 = self
                    .segments
                    .iter()
                    .map(|s| {
                        let lo = s.start.max(a);
                        let hi = s.end.min(b);
                        if hi > lo {
                            s.value * (hi - lo)
                        } else {
                            0.0
                        }
                    })
                    .sum();
                total / (b - a)
            })
            .collect()
    }

    pub fn validate(&self, length: f64) -> Result<()> {
        let mut segs = self.segments.clone();
        segs.sort_by(|a, b| a.start.total_cmp(&b.start));
        for s in &segs {
            if !(s.end > s.start) || s.start < 0.0 || s.end > length * (1.0 + 1e-12) || !s.value.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "segment [{:e}, {:e}] outside channel or empty",
                    s.start, s.end
                )));
            }
        }
        for w in segs.windows(2) {
            if w[1].start < w[0].end * (1.0 - 1e-12) {
                return Err(Error::InvalidParameter("profile segments overlap".into()));
            }
        }
        Ok(())
    }
}

/// Fixed charge inside the channel and at the two mouths.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChargeProfile {
    pub profile: PiecewiseProfile,
    /// `P(0^-)` and `P(d^+)`; `None` takes the value just inside the channel.
    pub mouth: [Option<f64>; 2],
}

impl ChargeProfile {
    pub fn mouth_values(&self, length: f64) -> [f64; 2] {
        [
            self.mouth[0].unwrap_or_else(|| self.profile.at(0.0)),
            self.mouth[1].unwrap_or_else(|| self.profile.at(length)),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum VelocityProfile {
    Constant(f64),
    Piecewise(PiecewiseProfile),
}

impl Default for VelocityProfile {
    fn default() -> Self {
        VelocityProfile::Constant(0.0)
    }
}

impl VelocityProfile {
    pub fn element_values(&self, mesh: &Mesh<f64>) -> Vec<f64> {
        match self {
            VelocityProfile::Constant(v) => vec![*v; mesh.n_elements()],
            VelocityProfile::Piecewise(p) => p.element_averages(mesh),
        }
    }
}

/// A nanochannel filled with a binary monovalent electrolyte between two baths.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    /// Channel length `d`, m.
    pub length: f64,
    /// Cross-section, m^2.
    pub area: f64,
    pub charge: ChargeProfile,
    pub cation: SpeciesParams,
    pub anion: SpeciesParams,
    pub medium: MediumParams,
    /// Bath concentrations are ordered `[cation, anion]`.
    pub bath: BathConditions,
    /// Electrolyte velocity `v_e`, m/s.
    pub velocity: VelocityProfile,
}

impl Channel {
    pub fn species(&self) -> [&SpeciesParams; 2] {
        [&self.cation, &self.anion]
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0) || !(self.area > 0.0) {
            return Err(Error::InvalidParameter("length and area must be positive".into()));
        }
        self.cation.validate()?;
        self.anion.validate()?;
        if self.cation.valence != 1 || self.anion.valence != -1 {
            return Err(Error::InvalidParameter(
                "transport models take one monovalent cation and one monovalent anion".into(),
            ));
        }
        self.medium.validate()?;
        self.bath.validate(2)?;
        self.charge.profile.validate(self.length)?;
        if let VelocityProfile::Piecewise(p) = &self.velocity {
            p.validate(self.length)?;
        }
        Ok(())
    }

    pub fn mesh(&self, n_el: usize) -> Result<Mesh<f64>> {
        Mesh::uniform(0.0, self.length, n_el)
    }

    pub fn boundary_data(&self) -> Result<BoundaryData> {
        let sp = [self.cation.clone(), self.anion.clone()];
        dirichlet_data(self.charge.mouth_values(self.length), &sp, &self.bath)
    }
}
