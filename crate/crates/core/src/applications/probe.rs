use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::distortion::unit_vector;
use crate::embeddings::InvariantMap;
use crate::error::{Error, Result};
use crate::linalg::{add, dist, norm, scale, sub};
use crate::quotient::QuotientPoint;

/// Random unit directions drawn per radius.
pub const PROBE_DIRECTIONS: usize = 256;
pub const PROBE_CSV_HEADER: &str = "radius,min_ratio";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow {
    pub radius: f64,
    pub min_ratio: f64,
}

/// Component of `delta` orthogonal to the subspace fixed by `stab`.
fn moving_part(center: &QuotientPoint, stab: &[usize], delta: &[f64]) -> Result<Vec<f64>> {
    let action = center.action();
    let mut avg = vec![0.0; delta.len()];
    for &k in stab {
        avg = add(&avg, &action.apply(k, delta)?);
    }
    Ok(sub(delta, &scale(&avg, 1.0 / stab.len() as f64)))
}

/// For each radius `r`, the minimum of `‖f(x) − f(c)‖ / d([x], [c])` over
/// perturbations `x = c + rδ`.
///
/// Directions `δ` are uniform on the sphere. When the center has a nontrivial
/// stabilizer in a finite group, each direction also contributes its component
/// that moves off the stabilizer's fixed subspace, where invariants lose first
/// order information.
pub fn lower_lipschitz_probe(
    map: &InvariantMap,
    center: &QuotientPoint,
    radii: &[f64],
    seed: u64,
) -> Result<Vec<ProbeRow>> {
    if radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
        return Err(Error::InvalidParameter("probe radii must be positive".into()));
    }
    if radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("probe radii must be strictly decreasing".into()));
    }
    let c = center.rep();
    let dim = c.len();
    let fc = map.evaluate(center)?;
    let action = center.action();
    let stab = match action.order() {
        Some(_) => action.stabilizer(c, 1e-9 * norm(c).max(1.0))?,
        None => Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut min_ratio = f64::INFINITY;
        for _ in 0..PROBE_DIRECTIONS {
            let delta = unit_vector(&mut rng, dim);
            let mut dirs = vec![delta.clone()];
            if stab.len() > 1 {
                let m = moving_part(center, &stab, &delta)?;
                let len = norm(&m);
                if len > 1e-12 {
                    dirs.push(scale(&m, 1.0 / len));
                }
            }
            for d in dirs {
                let x = add(c, &scale(&d, r));
                let din = action.quotient_distance(&x, c)?;
                if din <= 0.0 {
                    continue;
                }
                min_ratio = min_ratio.min(dist(&map.eval(&x)?, &fc) / din);
            }
        }
        rows.push(ProbeRow { radius: r, min_ratio });
    }
    Ok(rows)
}

pub fn write_probe_csv(w: &mut dyn Write, rows: &[ProbeRow]) -> std::io::Result<()> {
    writeln!(w, "{PROBE_CSV_HEADER}")?;
    for row in rows {
        writeln!(w, "{:.16e},{:.16e}", row.radius, row.min_ratio)?;
    }
    Ok(())
}

/// Least-squares slope of `log(min_ratio)` against `log(radius)`.
pub fn log_log_slope(rows: &[ProbeRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.radius.ln(), r.min_ratio.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::{outer_product_map, real_projective_embed};

    fn decades(lo: i32, hi: i32) -> Vec<f64> {
        (lo..=hi).map(|e| 10f64.powi(-e)).collect()
    }

    #[test]
    fn outer_product_ratio_tracks_radius() {
        let f = outer_product_map(2);
        let c = QuotientPoint::new(f.action().clone(), vec![0.0, 0.0]).unwrap();
        let rows = lower_lipschitz_probe(&f, &c, &decades(1, 6), 0).unwrap();
        assert!((log_log_slope(&rows) - 1.0).abs() < 0.05);
    }

    #[test]
    fn normalized_embedding_stays_bounded() {
        let f = real_projective_embed(2).unwrap();
        let c = QuotientPoint::new(f.action().clone(), vec![0.0, 0.0]).unwrap();
        let rows = lower_lipschitz_probe(&f, &c, &decades(1, 6), 0).unwrap();
        assert!(rows.iter().all(|r| r.min_ratio >= 1.0 - 1e-6));
    }

    #[test]
    fn radii_must_decrease() {
        let f = outer_product_map(2);
        let c = QuotientPoint::new(f.action().clone(), vec![0.0, 0.0]).unwrap();
        assert!(lower_lipschitz_probe(&f, &c, &[0.1, 0.2], 0).is_err());
        assert!(lower_lipschitz_probe(&f, &c, &[0.1, -0.2], 0).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_probe_csv(&mut buf, &[ProbeRow { radius: 0.5, min_ratio: 0.25 }]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], PROBE_CSV_HEADER);
        assert_eq!(lines[1].split(',').map(|v| v.parse::<f64>().unwrap()).collect::<Vec<_>>(), vec![0.5, 0.25]);
    }
}
