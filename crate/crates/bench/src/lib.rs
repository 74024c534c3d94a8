//! Seeded inputs shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbitmetric::SparseSeq;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    orbitmetric::distortion::gaussian_vector(rng, dim)
}

/// Scalar sequence with `len` Gaussian entries starting at a random offset.
pub fn sequence(rng: &mut ChaCha8Rng, len: usize) -> SparseSeq {
    let start = rng.gen_range(-4..=4);
    SparseSeq::from_scalars(start, &gaussian(rng, len))
}
