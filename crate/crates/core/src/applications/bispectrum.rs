use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::embeddings::InvariantMap;
use crate::error::{Error, Result};
use crate::linalg::as_complex;
use crate::quotient::GroupAction;

/// `x̂(k) = Σ_j x_j e^{−2πijk/d}`, evaluated directly.
pub fn dft(x: &[Complex64]) -> Vec<Complex64> {
    let d = x.len();
    (0..d)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * PI * ((j * k) % d) as f64 / d as f64))
                .sum()
        })
        .collect()
}

/// `B_kl = x̂(k)·conj(x̂(l))·x̂(l − k)`, indices mod `d`.
pub fn bispectrum(x: &[Complex64]) -> Result<DMatrix<Complex64>> {
    let d = x.len();
    if d == 0 {
        return Err(Error::UnsupportedDimension(0));
    }
    let h = dft(x);
    Ok(DMatrix::from_fn(d, d, |k, l| h[k] * h[l].conj() * h[(l + d - k) % d]))
}

/// The bispectrum on `C^d` as an invariant of circular shifts, flattened row
/// by row with interleaved real and imaginary parts.
pub fn bispectrum_map(d: usize) -> Result<InvariantMap> {
    if d == 0 {
        return Err(Error::UnsupportedDimension(0));
    }
    let action = Arc::new(GroupAction::circular_shift_complex(d));
    Ok(InvariantMap::new("bispectrum", action, 2 * d * d, move |x| {
        let b = bispectrum(&as_complex(x))?;
        Ok((0..d).flat_map(|k| (0..d).map(move |l| (k, l))).flat_map(|(k, l)| [b[(k, l)].re, b[(k, l)].im]).collect())
    }))
}
