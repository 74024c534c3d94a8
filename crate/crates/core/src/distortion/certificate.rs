use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::distortion::FiniteMetric;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{frobenius, sorted_symmetric_eigen};

/// Relative eigenvalue tolerance for PSD checks.
pub const PSD_TOL: f64 = 1e-8;
/// Tolerance on `Q·1 = 0`.
pub const ROW_SUM_TOL: f64 = 1e-9;

fn min_eigenvalue(q: &DMatrix<f64>) -> f64 {
    if q.nrows() == 0 {
        return 0.0;
    }
    sorted_symmetric_eigen(q).0.last().copied().unwrap_or(0.0)
}

fn matrix_rows(q: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..q.nrows()).map(|i| q.row(i).iter().copied().collect()).collect()
}

fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    for r in rows {
        check_dim(n, r.len())?;
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

/// Gram matrix `Q` of an embedding together with its squared distortion `t`:
/// `D_xy ≤ Q_xx − 2Q_xy + Q_yy ≤ t·D_xy` for every pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionCertificate {
    pub t: f64,
    pub q: DMatrix<f64>,
}

/// On-disk layout `{"t": real, "Q": [[...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateFile {
    pub t: f64,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<f64>>,
}

/// Violations found by [`DistortionCertificate::check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateResiduals {
    /// `max(0, −λ_min(Q)) / ‖Q‖_F`.
    pub psd: f64,
    /// Largest relative violation of the lower bounds `D ≤ ΔQ`.
    pub lower: f64,
    /// Largest relative violation of the upper bounds `ΔQ ≤ tD`.
    pub upper: f64,
}

impl CertificateResiduals {
    pub fn max(&self) -> f64 {
        self.psd.max(self.lower).max(self.upper)
    }
}

impl DistortionCertificate {
    /// `c₂ = √t`.
    pub fn c2(&self) -> f64 {
        self.t.sqrt()
    }

    /// Squared embedded distance `Q_ii − 2Q_ij + Q_jj`.
    pub fn embedded_sq(&self, i: usize, j: usize) -> f64 {
        self.q[(i, i)] - 2.0 * self.q[(i, j)] + self.q[(j, j)]
    }

    pub fn check(&self, metric: &FiniteMetric) -> Result<CertificateResiduals> {
        let n = metric.n();
        check_dim(n, self.q.nrows())?;
        let d = metric.squared();
        let norm = frobenius(&self.q).max(f64::MIN_POSITIVE);
        let psd = (-min_eigenvalue(&self.q)).max(0.0) / norm;
        let mut lower = 0.0f64;
        let mut upper = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                let e = self.embedded_sq(i, j);
                lower = lower.max((d[(i, j)] - e) / d[(i, j)]);
                upper = upper.max((e - self.t * d[(i, j)]) / (self.t * d[(i, j)]));
            }
        }
        Ok(CertificateResiduals { psd, lower, upper })
    }

    pub fn to_file(&self) -> CertificateFile {
        CertificateFile { t: self.t, q: matrix_rows(&self.q) }
    }

    pub fn from_file(f: &CertificateFile) -> Result<Self> {
        Ok(DistortionCertificate { t: f.t, q: matrix_from_rows(&f.q)? })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        DistortionCertificate::from_file(&serde_json::from_str(text)?)
    }
}

/// Symmetric `Q` with `Q·1 = 0`, PSD, bounding distortion from below through
/// `⟨D, Q₊⟩ ≤ c²·⟨D, Q₋⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate {
    pub q: DMatrix<f64>,
}

/// On-disk layout `{"Q": [[...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualFile {
    #[serde(rename = "Q")]
    pub q: Vec<Vec<f64>>,
}

impl DualCertificate {
    pub fn new(q: DMatrix<f64>) -> Self {
        DualCertificate { q }
    }

    /// Checks symmetry, `Q·1 = 0` and positive semidefiniteness.
    pub fn validate(&self) -> Result<()> {
        let n = self.q.nrows();
        if self.q.ncols() != n {
            return Err(Error::InvalidCertificate("Q is not square".into()));
        }
        let scale = self.q.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        for i in 0..n {
            for j in 0..i {
                if (self.q[(i, j)] - self.q[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidCertificate("Q is not symmetric".into()));
                }
            }
            let row: f64 = self.q.row(i).sum();
            if row.abs() > ROW_SUM_TOL * scale {
                return Err(Error::InvalidCertificate(format!("row {i} of Q sums to {row:e}")));
            }
        }
        let lam = min_eigenvalue(&self.q);
        if lam < -PSD_TOL * frobenius(&self.q) {
            return Err(Error::InvalidCertificate(format!("Q has eigenvalue {lam:e}")));
        }
        Ok(())
    }

    /// `(⟨D, Q₊⟩, ⟨D, Q₋⟩)` with `Q₊`, `Q₋` the entrywise positive and negative parts.
    pub fn pairings(&self, metric: &FiniteMetric) -> Result<(f64, f64)> {
        check_dim(metric.n(), self.q.nrows())?;
        let d = metric.squared();
        let mut plus = 0.0;
        let mut minus = 0.0;
        for (q, dv) in self.q.iter().zip(d.iter()) {
            if *q > 0.0 {
                plus += q * dv;
            } else {
                minus -= q * dv;
            }
        }
        Ok((plus, minus))
    }

    /// Squared-distortion lower bound `⟨D, Q₊⟩ / ⟨D, Q₋⟩`.
    pub fn lower_bound(&self, metric: &FiniteMetric) -> Result<f64> {
        let (plus, minus) = self.pairings(metric)?;
        Ok(if minus > 0.0 { plus / minus } else { 1.0 })
    }

    pub fn to_file(&self) -> DualFile {
        DualFile { q: matrix_rows(&self.q) }
    }

    pub fn from_file(f: &DualFile) -> Result<Self> {
        Ok(DualCertificate { q: matrix_from_rows(&f.q)? })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        DualCertificate::from_file(&serde_json::from_str(text)?)
    }
}

/// Outcome of [`verify_dual`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualVerification {
    /// `c²⟨D,Q₋⟩ − ⟨D,Q₊⟩`.
    pub gap: f64,
    pub optimal: bool,
}

/// Checks whether `dual` certifies that `c` is the Euclidean distortion of `metric`.
pub fn verify_dual(metric: &FiniteMetric, dual: &DualCertificate, c: f64) -> Result<DualVerification> {
    dual.validate()?;
    let (plus, minus) = dual.pairings(metric)?;
    let gap = c * c * minus - plus;
    let nonzero = dual.q.iter().any(|v| *v != 0.0);
    Ok(DualVerification { gap, optimal: nonzero && gap.abs() <= 1e-9 * minus })
}

/// Circulant certificate for the even cycle: `2cos²(π/n)` on the diagonal, `−1`
/// for adjacent vertices and `2sin²(π/n)` for antipodal ones.
pub fn cycle_certificate(n: usize) -> Result<DualCertificate> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("cycle certificate needs even n ≥ 4, got {n}")));
    }
    let c = (PI / n as f64).cos();
    let s = (PI / n as f64).sin();
    let q = DMatrix::from_fn(n, n, |i, j| {
        let k = i.abs_diff(j);
        let k = k.min(n - k);
        if k == 0 {
            2.0 * c * c
        } else if k == 1 {
            -1.0
        } else if k == n / 2 {
            2.0 * s * s
        } else {
            0.0
        }
    });
    Ok(DualCertificate { q })
}

/// Points (rows) realizing a Gram matrix; negative eigenvalues are clipped.
pub fn gram_to_embedding(cert: &DistortionCertificate) -> Vec<Vec<f64>> {
    let n = cert.q.nrows();
    if n == 0 {
        return Vec::new();
    }
    let (vals, vecs) = sorted_symmetric_eigen(&cert.q);
    (0..n)
        .map(|i| (0..n).map(|k| vecs[(i, k)] * vals[k].max(0.0).sqrt()).collect())
        .collect()
}
