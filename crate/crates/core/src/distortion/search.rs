use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::distortion::certificate::{CertificateFile, DualFile};
use crate::distortion::empirical::gaussian_vector;
use crate::distortion::sdp::{solve_distortion_sdp, SdpOptions, SdpSolution};
use crate::distortion::FiniteMetric;
use crate::error::{Error, Result};
use crate::quotient::GroupAction;

/// Source of random representatives in a quotient space.
pub trait QuotientSampler {
    fn action(&self) -> &GroupAction;
    fn sample_point(&self, rng: &mut ChaCha8Rng) -> Vec<f64>;
    /// A nearby representative; defaults to a Gaussian perturbation of scale 0.3.
    fn perturb(&self, rng: &mut ChaCha8Rng, x: &[f64]) -> Vec<f64> {
        x.iter().zip(gaussian_vector(rng, x.len())).map(|(a, g)| a + 0.3 * g).collect()
    }
}

/// Gaussian points of `R^d` under the trivial group.
#[derive(Debug, Clone)]
pub struct EuclideanSampler {
    action: GroupAction,
    dim: usize,
}

impl EuclideanSampler {
    pub fn new(dim: usize) -> Self {
        EuclideanSampler { action: GroupAction::trivial(dim), dim }
    }
}

impl QuotientSampler for EuclideanSampler {
    fn action(&self) -> &GroupAction {
        &self.action
    }
    fn sample_point(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        gaussian_vector(rng, self.dim)
    }
}

/// Gaussian sequences supported in `{0, …, support − 1}`, modulo integer shifts.
#[derive(Debug, Clone)]
pub struct ShiftSampler {
    action: GroupAction,
    support: usize,
}

impl ShiftSampler {
    pub fn new(support: usize) -> Self {
        ShiftSampler { action: GroupAction::integer_shift(), support: support.max(1) }
    }
}

impl QuotientSampler for ShiftSampler {
    fn action(&self) -> &GroupAction {
        &self.action
    }
    fn sample_point(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        // Random support length and sparsity pattern, never the zero sequence.
        loop {
            let len = rng.gen_range(1..=self.support);
            let x: Vec<f64> = (0..len)
                .map(|_| if rng.gen_bool(0.7) { rng.sample(rand_distr::StandardNormal) } else { 0.0 })
                .collect();
            if x.iter().any(|v| *v != 0.0) {
                return x;
            }
        }
    }
}

/// Gaussian multisets of at most `support` points of `R^d`, modulo all permutations.
#[derive(Debug, Clone)]
pub struct MultisetSampler {
    action: GroupAction,
    d: usize,
    support: usize,
}

impl MultisetSampler {
    pub fn new(d: usize, support: usize) -> Result<Self> {
        Ok(MultisetSampler { action: GroupAction::multiset(d)?, d, support: support.max(1) })
    }
}

impl QuotientSampler for MultisetSampler {
    fn action(&self) -> &GroupAction {
        &self.action
    }
    fn sample_point(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let k = rng.gen_range(1..=self.support);
        gaussian_vector(rng, k * self.d)
    }
}

#[derive(Debug, Clone)]
pub struct LowerBoundResult {
    /// Best certified lower bound on `c₂` over all rounds.
    pub best_c2: f64,
    /// Representatives of the best subset.
    pub witness: Vec<Vec<f64>>,
    pub solution: SdpSolution,
    /// Best value after each round.
    pub history: Vec<f64>,
    pub failed_rounds: usize,
}

/// Archive layout for the best witness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LowerBoundArchive {
    pub best_c2: f64,
    pub upper_c2: f64,
    pub witness: Vec<Vec<f64>>,
    pub certificate: CertificateFile,
    pub dual: DualFile,
    pub history: Vec<f64>,
    pub failed_rounds: usize,
}

impl LowerBoundResult {
    pub fn archive(&self) -> LowerBoundArchive {
        LowerBoundArchive {
            best_c2: self.best_c2,
            upper_c2: self.solution.c2(),
            witness: self.witness.clone(),
            certificate: self.solution.certificate.to_file(),
            dual: self.solution.dual.to_file(),
            history: self.history.clone(),
            failed_rounds: self.failed_rounds,
        }
    }
}

/// Fraction of rounds spent on fresh random subsets before local moves start.
const EXPLORE_FRACTION: f64 = 0.2;

/// Searches for finite subsets of a quotient with large certified distortion.
///
/// Early rounds draw fresh subsets; later rounds mostly replace or perturb one
/// point of the incumbent and keep the move when the certified value improves.
/// Rounds whose subset is degenerate or whose solve fails are skipped.
pub fn lower_bound_search(
    space: &dyn QuotientSampler,
    set_size: usize,
    rounds: usize,
    seed: u64,
) -> Result<LowerBoundResult> {
    if set_size < 2 {
        return Err(Error::InvalidParameter("subsets need at least two points".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = SdpOptions { tol: 1e-7, ..SdpOptions::default() };
    let mut best: Option<(f64, Vec<Vec<f64>>, SdpSolution)> = None;
    let mut history = Vec::with_capacity(rounds);
    let mut failed = 0;
    let explore = (rounds as f64 * EXPLORE_FRACTION).ceil() as usize;
    for round in 0..rounds {
        let candidate: Vec<Vec<f64>> = match &best {
            Some((_, w, _)) if round >= explore && rng.gen_bool(0.8) => {
                let mut c = w.clone();
                let i = rng.gen_range(0..c.len());
                c[i] = if rng.gen_bool(0.3) { space.sample_point(&mut rng) } else { space.perturb(&mut rng, &c[i]) };
                c
            }
            _ => (0..set_size).map(|_| space.sample_point(&mut rng)).collect(),
        };
        let solved = FiniteMetric::from_quotient_points(space.action(), &candidate)
            .and_then(|m| solve_distortion_sdp(&m, &opts));
        match solved {
            Ok(sol) => {
                let c2 = sol.c2_lower();
                if best.as_ref().is_none_or(|(b, _, _)| c2 > *b) {
                    best = Some((c2, candidate, sol));
                }
            }
            Err(_) => failed += 1,
        }
        history.push(best.as_ref().map_or(1.0, |(b, _, _)| *b));
    }
    let (best_c2, witness, solution) =
        best.ok_or_else(|| Error::SolverDivergence(format!("all {rounds} rounds failed")))?;
    Ok(LowerBoundResult { best_c2, witness, solution, history, failed_rounds: failed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_subsets_are_euclidean() {
        let r = lower_bound_search(&ShiftSampler::new(4), 2, 10, 0).unwrap();
        assert!((r.best_c2 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn euclidean_subsets_have_no_distortion() {
        let r = lower_bound_search(&EuclideanSampler::new(3), 6, 10, 1).unwrap();
        assert!((r.best_c2 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn history_is_monotone() {
        let r = lower_bound_search(&ShiftSampler::new(4), 5, 40, 3).unwrap();
        assert!(r.history.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(r.history.len(), 40);
        assert_eq!(*r.history.last().unwrap(), r.best_c2);
    }
}
