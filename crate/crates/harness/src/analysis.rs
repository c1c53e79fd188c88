//! Post-processing of profiles and IV tables.

use thermoflux_core::physics::{K_B, Q};

/// Largest jump between neighbouring values relative to their mean.
pub fn layer_strength(values: &[f64]) -> f64 {
    values
        .windows(2)
        .map(|w| {
            let mean = 0.5 * (w[0].abs() + w[1].abs());
            if mean > 0.0 {
                (w[1] - w[0]).abs() / mean
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OscillationReport {
    pub negatives: usize,
    /// Number of sign changes of the first differences.
    pub extrema: usize,
}

impl OscillationReport {
    pub fn oscillates(&self) -> bool {
        self.negatives > 0
    }
}

pub fn oscillation(values: &[f64]) -> OscillationReport {
    let negatives = values.iter().filter(|&&v| v < 0.0).count();
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).filter(|d| *d != 0.0).collect();
    let extrema = diffs.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
    OscillationReport { negatives, extrema }
}

/// Trapezoidal L2 distance between two nodal profiles on the same nodes.
pub fn l2_distance(x: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 0..x.len().saturating_sub(1) {
        let e0 = a[k] - b[k];
        let e1 = a[k + 1] - b[k + 1];
        s += 0.5 * (x[k + 1] - x[k]) * (e0 * e0 + e1 * e1);
    }
    s.sqrt()
}

/// Largest distance from the straight line through the end values,
/// relative to the end-to-end difference.
pub fn deviation_from_linear(x: &[f64], t: &[f64]) -> f64 {
    let n = t.len();
    if n < 2 {
        return 0.0;
    }
    let (x0, x1) = (x[0], x[n - 1]);
    let (t0, t1) = (t[0], t[n - 1]);
    let span = (t1 - t0).abs();
    let dev = x
        .iter()
        .zip(t)
        .map(|(&xi, &ti)| (ti - (t0 + (t1 - t0) * (xi - x0) / (x1 - x0))).abs())
        .fold(0.0, f64::max);
    if span > 0.0 {
        dev / span
    } else {
        dev
    }
}

/// Least-squares saturation current of `I = I0 (exp(q V / (k T)) - 1)`.
pub fn fit_ideal_diode(voltage: &[f64], current: &[f64], temperature: f64) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (&v, &i) in voltage.iter().zip(current) {
        let e = (Q * v / (K_B * temperature)).exp_m1();
        num += i * e;
        den += e * e;
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

pub fn ideal_diode_current(i0: f64, voltage: f64, temperature: f64) -> f64 {
    i0 * (Q * voltage / (K_B * temperature)).exp_m1()
}
