use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quotient::GroupAction;

/// Tolerance of the triangle inequality check on `√D`.
pub const TRIANGLE_TOL: f64 = 1e-9;

/// An `n`-point metric given by its matrix of squared distances.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetric {
    d: DMatrix<f64>,
}

/// On-disk layout `{"n": int, "D": [[squared distances]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiniteMetricFile {
    pub n: usize,
    #[serde(rename = "D")]
    pub d: Vec<Vec<f64>>,
}

impl FiniteMetric {
    /// Validates symmetry, zero diagonal, positive off-diagonal entries and the
    /// triangle inequality of `√D`.
    pub fn new(d: DMatrix<f64>) -> Result<Self> {
        let n = d.nrows();
        if d.ncols() != n {
            return Err(Error::InvalidMetric(format!("matrix is {}×{}", n, d.ncols())));
        }
        let scale = d.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        for i in 0..n {
            if d[(i, i)] != 0.0 {
                return Err(Error::InvalidMetric(format!("diagonal entry {i} is {}", d[(i, i)])));
            }
            for j in 0..i {
                if !d[(i, j)].is_finite() || (d[(i, j)] - d[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidMetric(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
                if d[(i, j)] <= 0.0 {
                    return Err(Error::InvalidMetric(format!("points {j} and {i} coincide")));
                }
            }
        }
        let d = (&d + d.transpose()) * 0.5;
        let root = d.map(f64::sqrt);
        let tol = TRIANGLE_TOL * scale.sqrt();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if root[(i, j)] > root[(i, k)] + root[(k, j)] + tol {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails for ({i}, {k}, {j})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteMetric { d })
    }

    /// From a matrix of (unsquared) distances.
    pub fn from_distances(dist: &DMatrix<f64>) -> Result<Self> {
        FiniteMetric::new(dist.map(|v| v * v))
    }

    /// Squared quotient distances between representatives.
    pub fn from_quotient_points(action: &GroupAction, points: &[Vec<f64>]) -> Result<Self> {
        let n = points.len();
        let mut d = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..i {
                let v = action.quotient_distance(&points[i], &points[j])?;
                d[(i, j)] = v * v;
                d[(j, i)] = v * v;
            }
        }
        FiniteMetric::new(d)
    }

    /// Shortest-path metric of the `n`-cycle.
    pub fn cycle(n: usize) -> Result<Self> {
        FiniteMetric::new(DMatrix::from_fn(n, n, |i, j| {
            let k = i.abs_diff(j);
            let v = k.min(n - k) as f64;
            v * v
        }))
    }

    pub fn n(&self) -> usize {
        self.d.nrows()
    }

    /// Squared distance matrix.
    pub fn squared(&self) -> &DMatrix<f64> {
        &self.d
    }

    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let k = indices.len();
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n()) {
            return Err(Error::InvalidParameter(format!("index {bad} out of range")));
        }
        FiniteMetric::new(DMatrix::from_fn(k, k, |a, b| self.d[(indices[a], indices[b])]))
    }

    pub fn to_file(&self) -> FiniteMetricFile {
        FiniteMetricFile {
            n: self.n(),
            d: (0..self.n()).map(|i| self.d.row(i).iter().copied().collect()).collect(),
        }
    }

    pub fn from_file(f: &FiniteMetricFile) -> Result<Self> {
        if f.d.len() != f.n || f.d.iter().any(|r| r.len() != f.n) {
            return Err(Error::InvalidMetric(format!("D is not {}×{}", f.n, f.n)));
        }
        FiniteMetric::new(DMatrix::from_fn(f.n, f.n, |i, j| f.d[i][j]))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        FiniteMetric::from_file(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("metric serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_metric() {
        let m = FiniteMetric::cycle(4).unwrap();
        assert_eq!(m.squared()[(0, 2)], 4.0);
        assert_eq!(m.squared()[(0, 3)], 1.0);
    }

    #[test]
    fn rejects_invalid() {
        let bad_diag = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 0.0]);
        assert!(FiniteMetric::new(bad_diag).is_err());
        let asym = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(FiniteMetric::new(asym).is_err());
        let zero = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 0.0]);
        assert!(FiniteMetric::new(zero).is_err());
        // √9 > √1 + √1.
        let tri = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 9.0, 1.0, 0.0, 1.0, 9.0, 1.0, 0.0]);
        assert!(FiniteMetric::new(tri).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = FiniteMetric::cycle(5).unwrap();
        assert_eq!(FiniteMetric::from_json(&m.to_json()).unwrap(), m);
        assert!(FiniteMetric::from_json(r#"{"n":2,"D":[[0,1]]}"#).is_err());
    }

    #[test]
    fn subset_keeps_entries() {
        let m = FiniteMetric::cycle(6).unwrap();
        let s = m.subset(&[0, 3]).unwrap();
        assert_eq!(s.squared()[(0, 1)], 9.0);
    }
}
