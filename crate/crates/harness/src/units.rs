//! Quantities written as `"<number> <unit>"`, converted to SI at ingestion.

use std::fmt;

use thermoflux_core::physics::N_A;

/// Physical dimension of a configuration field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Area,
    Concentration,
    Voltage,
    Temperature,
    Velocity,
    Mobility,
    Mass,
    Conductivity,
    Dimensionless,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Dimension::Length => "length",
            Dimension::Area => "area",
            Dimension::Concentration => "concentration",
            Dimension::Voltage => "voltage",
            Dimension::Temperature => "temperature",
            Dimension::Velocity => "velocity",
            Dimension::Mobility => "mobility",
            Dimension::Mass => "mass",
            Dimension::Conductivity => "thermal conductivity",
            Dimension::Dimensionless => "dimensionless",
        };
        f.write_str(s)
    }
}

/// Conversion of a unit to SI: an exact power of ten or a general factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scale {
    Decimal(i32),
    Factor(f64),
}

impl Scale {
    pub fn factor(self) -> f64 {
        match self {
            Scale::Decimal(e) => 10f64.powi(e),
            Scale::Factor(f) => f,
        }
    }
}

/// SI scale of `unit` for `dim`, or `None` if the unit is unknown.
pub fn unit_scale(dim: Dimension, unit: &str) -> Option<Scale> {
    use Scale::{Decimal, Factor};
    let mol_l = 1e3 * N_A;
    let s = match (dim, unit) {
        (Dimension::Length, "m") => Decimal(0),
        (Dimension::Length, "mm") => Decimal(-3),
        (Dimension::Length, "um") => Decimal(-6),
        (Dimension::Length, "nm") => Decimal(-9),
        (Dimension::Length, "A") => Decimal(-10),
        (Dimension::Area, "m^2") => Decimal(0),
        (Dimension::Area, "um^2") => Decimal(-12),
        (Dimension::Area, "nm^2") => Decimal(-18),
        (Dimension::Area, "A^2") => Decimal(-20),
        (Dimension::Concentration, "m^-3") => Decimal(0),
        (Dimension::Concentration, "M" | "mol/L") => Factor(mol_l),
        (Dimension::Concentration, "mM" | "mmol/L") => Factor(1e-3 * mol_l),
        (Dimension::Concentration, "uM") => Factor(1e-6 * mol_l),
        (Dimension::Concentration, "mol/m^3") => Factor(N_A),
        (Dimension::Voltage, "V") => Decimal(0),
        (Dimension::Voltage, "mV") => Decimal(-3),
        (Dimension::Temperature, "K") => Decimal(0),
        (Dimension::Velocity, "m/s") => Decimal(0),
        (Dimension::Velocity, "mm/s") => Decimal(-3),
        (Dimension::Velocity, "um/s") => Decimal(-6),
        (Dimension::Mobility, "m^2/(V*s)" | "m^2/V/s") => Decimal(0),
        (Dimension::Mobility, "cm^2/(V*s)" | "cm^2/V/s") => Decimal(-4),
        (Dimension::Mass, "kg") => Decimal(0),
        (Dimension::Mass, "g") => Decimal(-3),
        (Dimension::Mass, "Da" | "u") => Factor(1.660_539_066_60e-27),
        (Dimension::Conductivity, "W/(m*K)" | "W/m/K") => Decimal(0),
        (_, "") => Decimal(0),
        _ => return None,
    };
    Some(s)
}

/// SI factor of `unit` for `dim`.
pub fn unit_factor(dim: Dimension, unit: &str) -> Option<f64> {
    unit_scale(dim, unit).map(Scale::factor)
}

// Decimal prefixes shift the exponent of the literal so that "2.5 nm"
// rounds once, exactly like the literal 2.5e-9.
fn shifted(num: &str, e: i32) -> Option<f64> {
    let (mantissa, exp) = match num.find(['e', 'E']) {
        Some(i) => (&num[..i], num[i + 1..].parse::<i32>().ok()?),
        None => (num, 0),
    };
    mantissa.parse::<f64>().ok()?;
    format!("{mantissa}e{}", exp.checked_add(e)?).parse().ok()
}

/// Parses `"2.5 nm"` (or a bare number, taken as SI) into SI units.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64, String> {
    let t = text.trim();
    let split = t
        .char_indices()
        .find(|&(_, c)| c.is_whitespace())
        .map(|(i, _)| i)
        .unwrap_or(t.len());
    let (num, unit) = t.split_at(split);
    let unit = unit.trim();
    let scale = unit_scale(dim, unit).ok_or_else(|| format!("unknown {dim} unit {unit:?}"))?;
    let bad = || format!("cannot read a number from {text:?}");
    let v = match scale {
        Scale::Decimal(e) => shifted(num, e).ok_or_else(bad)?,
        Scale::Factor(f) => num.parse::<f64>().map_err(|_| bad())? * f,
    };
    if !v.is_finite() {
        return Err(format!("{text:?} is not finite"));
    }
    Ok(v)
}

/// Converts an SI value back into `unit`.
pub fn to_unit(value: f64, dim: Dimension, unit: &str) -> Option<f64> {
    unit_factor(dim, unit).map(|f| value / f)
}
