use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Grid size of the monotonicity check on `(0, 1/2]`.
pub const MONOTONE_GRID: usize = 10_000;
const EPS_FINE: f64 = 1e-8;
const EPS_COARSE: f64 = 1e-6;
const LIMIT_AGREEMENT: f64 = 1e-5;

/// `g(t) = |e^{2πit} − 1| / d(t)` for a translation-invariant metric `d` on `R/Z`.
pub fn circle_g(d: impl Fn(f64) -> f64) -> impl Fn(f64) -> f64 {
    move |t| 2.0 * (PI * t).sin() / d(t)
}

/// Euclidean distortion `lim_{t→0} g(t) / g(1/2)` of a circle metric whose `g`
/// is monotonically decreasing on `(0, 1/2]`.
pub fn circle_distortion(g: impl Fn(f64) -> f64) -> Result<f64> {
    let step = 0.5 / MONOTONE_GRID as f64;
    let mut prev = g(step);
    for k in 2..=MONOTONE_GRID {
        let t = k as f64 * step;
        let v = g(t);
        if !v.is_finite() || v > prev + 1e-12 * prev.abs().max(1.0) {
            return Err(Error::NotMonotone(t));
        }
        prev = v;
    }
    let half = g(0.5);
    if !(half > 0.0) {
        return Err(Error::InvalidParameter(format!("g(1/2) = {half} must be positive")));
    }
    let fine = g(EPS_FINE) / half;
    let coarse = g(EPS_COARSE) / half;
    if (fine - coarse).abs() > LIMIT_AGREEMENT {
        return Err(Error::InvalidParameter(format!(
            "limit at 0 is unstable: {fine} at ε = {EPS_FINE:e}, {coarse} at ε = {EPS_COARSE:e}"
        )));
    }
    Ok(fine)
}
