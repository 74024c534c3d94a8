use std::io::Write;
use std::sync::mpsc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::embeddings::InvariantMap;
use crate::error::{Error, Result};
use crate::linalg::{dist, norm, scale};

/// Pairs with quotient distance at or below this are skipped.
pub const DEGENERATE_TOL: f64 = 1e-12;
/// Largest tolerated fraction of degenerate pairs.
pub const MAX_DEGENERATE_FRACTION: f64 = 0.01;
/// Pairs drawn from one seeded stream; blocks, not workers, own the seeds.
pub const BLOCK_SIZE: usize = 4096;

/// Source of input pairs.
pub trait PairSampler: Sync {
    fn sample(&self, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>);
}

impl<F> PairSampler for F
where
    F: Fn(&mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) + Sync,
{
    fn sample(&self, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
        self(rng)
    }
}

pub fn gaussian_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn unit_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v = gaussian_vector(rng, dim);
        let r = norm(&v);
        if r > 1e-12 {
            return scale(&v, 1.0 / r);
        }
    }
}

/// Independent standard Gaussian vectors.
#[derive(Debug, Clone, Copy)]
pub struct GaussianPairs {
    pub dim: usize,
}

impl PairSampler for GaussianPairs {
    fn sample(&self, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
        (gaussian_vector(rng, self.dim), gaussian_vector(rng, self.dim))
    }
}

/// Independent uniform points on the unit sphere.
#[derive(Debug, Clone, Copy)]
pub struct SpherePairs {
    pub dim: usize,
}

impl PairSampler for SpherePairs {
    fn sample(&self, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
        (unit_vector(rng, self.dim), unit_vector(rng, self.dim))
    }
}

/// Random directions with log-uniform radii in `[10^-decades, 10^decades]`.
#[derive(Debug, Clone, Copy)]
pub struct RadialPairs {
    pub dim: usize,
    pub decades: f64,
}

impl PairSampler for RadialPairs {
    fn sample(&self, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
        let draw = |rng: &mut ChaCha8Rng| {
            let r = 10f64.powf(rng.gen_range(-self.decades..=self.decades));
            scale(&unit_vector(rng, self.dim), r)
        };
        let a = draw(rng);
        (a, draw(rng))
    }
}

/// Unit-sphere pairs at sphere distance below `max_sep`, for probing the local
/// (small-distance) regime of sphere maps.
#[derive(Debug, Clone, Copy)]
pub struct NearbySpherePairs {
    pub dim: usize,
    pub max_sep: f64,
}

impl PairSampler for NearbySpherePairs {
    fn sample(&self, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
        let u = unit_vector(rng, self.dim);
        let eps = self.max_sep * rng.gen::<f64>();
        let v: Vec<f64> = u.iter().zip(gaussian_vector(rng, self.dim)).map(|(a, g)| a + eps * g).collect();
        let r = norm(&v);
        (u, scale(&v, 1.0 / r))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalBounds {
    /// Smallest ratio of output distance to quotient distance.
    pub alpha_hat: f64,
    /// Largest ratio.
    pub beta_hat: f64,
    pub pairs_used: usize,
    pub degenerate: usize,
}

impl EmpiricalBounds {
    pub fn distortion(&self) -> f64 {
        self.beta_hat / self.alpha_hat
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SamplingOptions {
    pub seed: u64,
    pub threads: usize,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        SamplingOptions { seed: 0, threads: 1 }
    }
}

struct BlockResult {
    min: f64,
    max: f64,
    used: usize,
    degenerate: usize,
    rows: Vec<(f64, f64)>,
}

fn run_block(
    map: &InvariantMap,
    sampler: &dyn PairSampler,
    seed: u64,
    count: usize,
    keep_rows: bool,
) -> Result<BlockResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let action = map.action();
    let mut out = BlockResult {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        used: 0,
        degenerate: 0,
        rows: Vec::with_capacity(if keep_rows { count } else { 0 }),
    };
    for _ in 0..count {
        let (x, y) = sampler.sample(&mut rng);
        let din = action.quotient_distance(&x, &y)?;
        if din <= DEGENERATE_TOL {
            out.degenerate += 1;
            continue;
        }
        let dout = dist(&map.eval(&x)?, &map.eval(&y)?);
        let ratio = dout / din;
        out.min = out.min.min(ratio);
        out.max = out.max.max(ratio);
        out.used += 1;
        if keep_rows {
            out.rows.push((din, dout));
        }
    }
    Ok(out)
}

/// Writes one CSV ratio row with 17 significant digits.
pub fn write_ratio_row(w: &mut dyn Write, din: f64, dout: f64) -> std::io::Result<()> {
    writeln!(w, "{din:.16e},{dout:.16e}")
}

pub const RATIO_CSV_HEADER: &str = "input_distance,output_distance";

/// Measures `min` and `max` of `‖f(x) − f(y)‖ / d([x],[y])` over sampled pairs.
///
/// Pair block `b` is drawn from a generator seeded with `seed + b`, so the
/// summary does not depend on the thread count. When `sink` is given, rows
/// `input_distance,output_distance` are streamed to it block by block (row
/// order follows block completion when several threads run).
pub fn empirical_bilipschitz(
    map: &InvariantMap,
    sampler: &dyn PairSampler,
    pairs: usize,
    opts: SamplingOptions,
    mut sink: Option<&mut dyn Write>,
) -> Result<EmpiricalBounds> {
    let blocks = pairs.div_ceil(BLOCK_SIZE);
    let block_len = |b: usize| BLOCK_SIZE.min(pairs - b * BLOCK_SIZE);
    let keep = sink.is_some();
    if let Some(w) = sink.as_deref_mut() {
        writeln!(w, "{RATIO_CSV_HEADER}").map_err(|e| Error::Parse(e.to_string()))?;
    }
    let mut total = BlockResult { min: f64::INFINITY, max: f64::NEG_INFINITY, used: 0, degenerate: 0, rows: vec![] };
    let mut merge = |r: BlockResult, sink: &mut Option<&mut dyn Write>| -> Result<()> {
        total.min = total.min.min(r.min);
        total.max = total.max.max(r.max);
        total.used += r.used;
        total.degenerate += r.degenerate;
        if let Some(w) = sink.as_deref_mut() {
            for (a, b) in r.rows {
                write_ratio_row(w, a, b).map_err(|e| Error::Parse(e.to_string()))?;
            }
        }
        Ok(())
    };

    let threads = opts.threads.max(1).min(blocks.max(1));
    if threads == 1 {
        for b in 0..blocks {
            let r = run_block(map, sampler, opts.seed.wrapping_add(b as u64), block_len(b), keep)?;
            merge(r, &mut sink)?;
        }
    } else {
        let (tx, rx) = mpsc::channel::<Result<BlockResult>>();
        std::thread::scope(|scope| -> Result<()> {
            for w in 0..threads {
                let tx = tx.clone();
                scope.spawn(move || {
                    for b in (w..blocks).step_by(threads) {
                        let r = run_block(map, sampler, opts.seed.wrapping_add(b as u64), block_len(b), keep);
                        let failed = r.is_err();
                        if tx.send(r).is_err() || failed {
                            break;
                        }
                    }
                });
            }
            drop(tx);
            for r in rx {
                merge(r?, &mut sink)?;
            }
            Ok(())
        })?;
    }

    if pairs > 0 && total.degenerate as f64 > MAX_DEGENERATE_FRACTION * pairs as f64 {
        return Err(Error::TooManyDegeneratePairs { degenerate: total.degenerate, total: pairs });
    }
    Ok(EmpiricalBounds {
        alpha_hat: total.min,
        beta_hat: total.max,
        pairs_used: total.used,
        degenerate: total.degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::{identity_map, outer_product_map, real_projective_embed};

    #[test]
    fn identity_is_isometric() {
        let b = empirical_bilipschitz(&identity_map(3), &GaussianPairs { dim: 3 }, 1000, SamplingOptions::default(), None)
            .unwrap();
        assert!((b.alpha_hat - 1.0).abs() < 1e-12 && (b.beta_hat - 1.0).abs() < 1e-12);
        assert_eq!(b.pairs_used, 1000);
    }

    #[test]
    fn projective_ratios_in_range() {
        let f = real_projective_embed(2).unwrap();
        let b = empirical_bilipschitz(&f, &GaussianPairs { dim: 2 }, 20_000, SamplingOptions::default(), None).unwrap();
        assert!(b.alpha_hat >= 1.0 - 1e-9 && b.beta_hat <= 2f64.sqrt() + 1e-9);
    }

    #[test]
    fn thread_count_does_not_change_summary() {
        let f = real_projective_embed(3).unwrap();
        let s = GaussianPairs { dim: 3 };
        let one = empirical_bilipschitz(&f, &s, 10_000, SamplingOptions { seed: 7, threads: 1 }, None).unwrap();
        let four = empirical_bilipschitz(&f, &s, 10_000, SamplingOptions { seed: 7, threads: 4 }, None).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn raw_outer_product_upper_ratio_grows_with_radius() {
        let f = outer_product_map(2);
        let small = empirical_bilipschitz(&f, &RadialPairs { dim: 2, decades: 0.5 }, 5000, SamplingOptions::default(), None)
            .unwrap();
        let large = empirical_bilipschitz(&f, &RadialPairs { dim: 2, decades: 3.0 }, 5000, SamplingOptions::default(), None)
            .unwrap();
        assert!(large.beta_hat > 100.0 * small.beta_hat);
    }

    #[test]
    fn csv_stream_has_header_and_rows() {
        let mut buf = Vec::new();
        empirical_bilipschitz(&identity_map(2), &GaussianPairs { dim: 2 }, 3, SamplingOptions::default(), Some(&mut buf))
            .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], RATIO_CSV_HEADER);
        assert_eq!(lines.len(), 4);
        let parts: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
        assert!((parts[0] - parts[1]).abs() < 1e-15);
    }

    #[test]
    fn degenerate_pairs_are_counted() {
        let same = |rng: &mut ChaCha8Rng| {
            let v = gaussian_vector(rng, 2);
            (v.clone(), v)
        };
        let r = empirical_bilipschitz(&identity_map(2), &same, 100, SamplingOptions::default(), None);
        assert!(matches!(r, Err(Error::TooManyDegeneratePairs { degenerate: 100, total: 100 })));
    }
}
