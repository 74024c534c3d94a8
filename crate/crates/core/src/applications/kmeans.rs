use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::applications::Dataset;
use crate::embeddings::InvariantMap;
use crate::error::{Error, Result};
use crate::linalg::dist_sq;

pub const MAX_LLOYD_ITERATIONS: usize = 100;
/// Lloyd stops once the relative objective improvement falls below this.
pub const LLOYD_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    /// Cluster label of each point, in `0..k`.
    pub labels: Vec<usize>,
    /// Objective of the partition under embedded squared distances.
    pub embedded_objective: f64,
    /// Objective of the same partition under squared quotient distances.
    pub quotient_objective: f64,
    pub iterations: usize,
}

impl KMeansResult {
    pub fn clusters(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); k];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }
}

/// `Σ_C (1/|C|) Σ_{i,j ∈ C} D_ij` over the clusters given by `labels`, with the
/// inner sum over ordered pairs.
pub fn kmeans_objective(sq: &DMatrix<f64>, labels: &[usize]) -> f64 {
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut sums = vec![0.0; k];
    let mut sizes = vec![0usize; k];
    for (i, &a) in labels.iter().enumerate() {
        sizes[a] += 1;
        for (j, &b) in labels.iter().enumerate() {
            if a == b {
                sums[a] += sq[(i, j)];
            }
        }
    }
    sums.iter().zip(&sizes).filter(|(_, &s)| s > 0).map(|(v, &s)| v / s as f64).sum()
}

fn nearest(p: &[f64], centers: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, v) in centers.iter().enumerate() {
        let d = dist_sq(p, v);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn plus_plus(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centers = vec![points[rng.gen_range(0..points.len())].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| dist_sq(p, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut u = rng.gen::<f64>() * total;
            let mut pick = d2.len() - 1;
            for (i, w) in d2.iter().enumerate() {
                if u < *w {
                    pick = i;
                    break;
                }
                u -= w;
            }
            pick
        } else {
            rng.gen_range(0..points.len())
        };
        centers.push(points[next].clone());
        for (i, p) in points.iter().enumerate() {
            d2[i] = d2[i].min(dist_sq(p, &centers[centers.len() - 1]));
        }
    }
    centers
}

fn centroids(points: &[Vec<f64>], labels: &[usize], old: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let dim = points[0].len();
    let mut sums = vec![vec![0.0; dim]; old.len()];
    let mut counts = vec![0usize; old.len()];
    for (p, &l) in points.iter().zip(labels) {
        counts[l] += 1;
        for (s, v) in sums[l].iter_mut().zip(p) {
            *s += v;
        }
    }
    sums.into_iter()
        .zip(&counts)
        .zip(old)
        .map(|((s, &c), o)| if c == 0 { o.clone() } else { s.into_iter().map(|v| v / c as f64).collect() })
        .collect()
}

/// Moves the point farthest from its center into each empty cluster.
fn fill_empty(points: &[Vec<f64>], labels: &mut [usize], centers: &[Vec<f64>], k: usize) {
    for c in 0..k {
        if labels.contains(&c) {
            continue;
        }
        let mut sizes = vec![0usize; k];
        for &l in labels.iter() {
            sizes[l] += 1;
        }
        let far = (0..points.len())
            .filter(|&i| sizes[labels[i]] > 1)
            .max_by(|&a, &b| {
                dist_sq(&points[a], &centers[labels[a]]).total_cmp(&dist_sq(&points[b], &centers[labels[b]]))
            });
        if let Some(i) = far {
            labels[i] = c;
        }
    }
}

/// Lloyd's algorithm with k-means++ seeding on vectors; returns labels and the
/// number of iterations run.
pub fn lloyd(points: &[Vec<f64>], k: usize, seed: u64) -> Result<(Vec<usize>, usize)> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = plus_plus(points, k, &mut rng);
    let mut labels: Vec<usize> = points.iter().map(|p| nearest(p, &centers).0).collect();
    fill_empty(points, &mut labels, &centers, k);
    let cost = |labels: &[usize], centers: &[Vec<f64>]| -> f64 {
        points.iter().zip(labels).map(|(p, &l)| dist_sq(p, &centers[l])).sum()
    };
    let mut prev = f64::INFINITY;
    let mut iterations = 0;
    while iterations < MAX_LLOYD_ITERATIONS {
        iterations += 1;
        centers = centroids(points, &labels, &centers);
        let current = cost(&labels, &centers);
        if prev.is_finite() && prev - current <= LLOYD_REL_TOL * prev.abs() {
            break;
        }
        prev = current;
        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centers).0).collect();
        if next == labels {
            break;
        }
        labels = next;
        fill_empty(points, &mut labels, &centers, k);
    }
    Ok((labels, iterations))
}

/// Clusters the images of `data` under `map` and pulls the partition back.
pub fn pullback_kmeans(data: &Dataset, map: &InvariantMap, k: usize, seed: u64) -> Result<KMeansResult> {
    let n = data.len();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let embedded = data.embedded(map)?;
    let (labels, iterations) = lloyd(&embedded, k, seed)?;
    let e = DMatrix::from_fn(n, n, |i, j| dist_sq(&embedded[i], &embedded[j]));
    Ok(KMeansResult {
        embedded_objective: kmeans_objective(&e, &labels),
        quotient_objective: kmeans_objective(&data.quotient_sq_distances()?, &labels),
        labels,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::{identity_map, real_projective_embed};

    #[test]
    fn k_equal_n_gives_singletons() {
        let f = real_projective_embed(2).unwrap();
        let reps = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0], vec![-2.0, 0.5]];
        let data = Dataset::new(f.action().clone(), reps).unwrap();
        let r = pullback_kmeans(&data, &f, 4, 0).unwrap();
        let mut labels = r.labels.clone();
        labels.sort();
        assert_eq!(labels, vec![0, 1, 2, 3]);
        assert_eq!(r.quotient_objective, 0.0);
        assert_eq!(r.embedded_objective, 0.0);
    }

    #[test]
    fn single_cluster_objective_is_pairwise_sum_over_n() {
        let f = identity_map(1);
        let data = Dataset::new(f.action().clone(), vec![vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        let r = pullback_kmeans(&data, &f, 1, 0).unwrap();
        // Ordered pairs: 2·(1 + 9 + 4) / 3.
        assert!((r.quotient_objective - 28.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_k() {
        let f = identity_map(1);
        let data = Dataset::new(f.action().clone(), vec![vec![0.0]]).unwrap();
        assert_eq!(pullback_kmeans(&data, &f, 2, 0), Err(Error::InvalidK { k: 2, n: 1 }));
        assert_eq!(pullback_kmeans(&data, &f, 0, 0), Err(Error::InvalidK { k: 0, n: 1 }));
    }

    #[test]
    fn separated_blobs_are_recovered() {
        let pts: Vec<Vec<f64>> =
            (0..10).map(|i| vec![if i < 5 { 0.0 } else { 100.0 } + i as f64 * 0.01]).collect();
        let (labels, _) = lloyd(&pts, 2, 3).unwrap();
        assert!(labels[..5].iter().all(|&l| l == labels[0]));
        assert!(labels[5..].iter().all(|&l| l == labels[5]));
        assert_ne!(labels[0], labels[5]);
    }

    #[test]
    fn seeded_runs_repeat() {
        let pts: Vec<Vec<f64>> = (0..30).map(|i| vec![(i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()]).collect();
        assert_eq!(lloyd(&pts, 3, 9).unwrap(), lloyd(&pts, 3, 9).unwrap());
    }
}
