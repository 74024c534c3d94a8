use nalgebra::DMatrix;

use crate::applications::Dataset;
use crate::embeddings::InvariantMap;
use crate::error::{Error, Result};
use crate::linalg::{double_center, frobenius};

const EIGEN_EPS: f64 = 1e-14;
const EIGEN_MAX_ITER: usize = 10_000;

/// Classical scaling of a squared-distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MdsEmbedding {
    pub coords: Vec<Vec<f64>>,
    /// Top `k` eigenvalues of `g(D)`, descending.
    pub eigenvalues: Vec<f64>,
    /// `max |D_ij − ‖y_i − y_j‖²|` over the returned coordinates.
    pub residual: f64,
}

/// Perturbation of `g(D)` caused by replacing `D` with embedded distances `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdsErrorReport {
    /// `‖g(D) − g(E)‖_F`.
    pub error: f64,
    /// `½·max{|α² − 1|, |β² − 1|}·‖D‖_F`.
    pub bound: f64,
}

impl MdsErrorReport {
    pub fn holds(&self, slack: f64) -> bool {
        self.error <= self.bound + slack
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MdsReport {
    pub embedding: MdsEmbedding,
    /// Present when a map with claimed bounds supplied `E`.
    pub error: Option<MdsErrorReport>,
}

/// Top-`k` classical MDS of `d` (squared distances) via `g(D) = −½ J D J`.
pub fn classical_mds(d: &DMatrix<f64>, k: usize) -> Result<MdsEmbedding> {
    let n = d.nrows();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let g = double_center(d);
    let eig = g
        .clone()
        .try_symmetric_eigen(EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or_else(|| Error::EigenFailure(format!("no convergence after {EIGEN_MAX_ITER} sweeps")))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let top = &order[..k];
    let eigenvalues: Vec<f64> = top.iter().map(|&i| eig.eigenvalues[i]).collect();
    let coords: Vec<Vec<f64>> = (0..n)
        .map(|p| top.iter().map(|&i| eig.eigenvalues[i].max(0.0).sqrt() * eig.eigenvectors[(p, i)]).collect())
        .collect();
    let mut residual = 0.0f64;
    for i in 0..n {
        for j in 0..i {
            let r: f64 = coords[i].iter().zip(&coords[j]).map(|(a, b)| (a - b) * (a - b)).sum();
            residual = residual.max((r - d[(i, j)]).abs());
        }
    }
    Ok(MdsEmbedding { coords, eigenvalues, residual })
}

/// Compares `g(D)` with `g(E)` when `α²D ≤ E ≤ β²D` entrywise.
pub fn mds_error_bound(d: &DMatrix<f64>, e: &DMatrix<f64>, alpha: f64, beta: f64) -> MdsErrorReport {
    let error = frobenius(&(double_center(d) - double_center(e)));
    let factor = (alpha * alpha - 1.0).abs().max((beta * beta - 1.0).abs());
    MdsErrorReport { error, bound: 0.5 * factor * frobenius(d) }
}

/// Classical MDS of the quotient distances of `data`. When `map` is given with
/// claimed bounds, also reports how far its embedded distances move `g(D)`.
pub fn quotient_mds(data: &Dataset, map: Option<&InvariantMap>, k: usize) -> Result<MdsReport> {
    let d = data.quotient_sq_distances()?;
    let embedding = classical_mds(&d, k)?;
    let error = match map {
        Some(f) => {
            let (Some(a), Some(b)) = (f.claimed_alpha(), f.claimed_beta()) else {
                return Err(Error::MissingBounds);
            };
            Some(mds_error_bound(&d, &data.embedded_sq_distances(f)?, a, b))
        }
        None => None,
    };
    Ok(MdsReport { embedding, error })
}
