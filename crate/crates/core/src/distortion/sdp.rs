//! Euclidean distortion of a finite metric by a primal-dual interior-point
//! method.
//!
//! One point is pinned at the origin, so an embedding is the Gram matrix `Y` of
//! the remaining `n − 1` points. With `E_p(Y)` the squared embedded length of
//! pair `p`, the program is
//!
//! ```text
//! minimize t   subject to   Y ⪰ 0,   E_p(Y) ≥ D_p,   t·D_p ≥ E_p(Y).
//! ```
//!
//! Iterates follow the HKM search direction with Mehrotra's predictor-corrector
//! and are finally repaired into an exactly feasible primal certificate and a
//! PSD dual certificate whose ratio brackets the optimum.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::distortion::{DistortionCertificate, DualCertificate, FiniteMetric};
use crate::error::{Error, Result};
use crate::linalg::{frobenius, sorted_symmetric_eigen};

/// Largest metric accepted.
pub const MAX_SDP_POINTS: usize = 64;
/// Relative duality gap below which iterates are repaired into certificates.
const REPAIR_GAP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpOptions {
    /// Target bracket width on `t` relative to `max(1, t)`.
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions { tol: 1e-8, max_iterations: 200 }
    }
}

/// Primal and dual certificates returned by [`solve_distortion_sdp`].
#[derive(Debug, Clone)]
pub struct SdpSolution {
    /// Feasible embedding; `certificate.t` is an upper bound on `c₂²`.
    pub certificate: DistortionCertificate,
    /// PSD, centered dual; its ratio is a lower bound on `c₂²`.
    pub dual: DualCertificate,
    /// `max{1, ⟨D, Q₊⟩ / ⟨D, Q₋⟩}` of `dual`.
    pub lower_bound: f64,
    pub iterations: usize,
}

impl SdpSolution {
    /// `√t` of the primal certificate.
    pub fn c2(&self) -> f64 {
        self.certificate.c2()
    }

    /// Certified lower bound on `c₂`.
    pub fn c2_lower(&self) -> f64 {
        self.lower_bound.sqrt()
    }
}

/// Returns a feasible certificate whose `t` lies within `tol` (relative) of
/// the squared Euclidean distortion.
pub fn sdp_distortion(metric: &FiniteMetric, tol: f64) -> Result<DistortionCertificate> {
    Ok(solve_distortion_sdp(metric, &SdpOptions { tol, ..SdpOptions::default() })?.certificate)
}

struct Problem {
    m: usize,
    svec_len: usize,
    /// Normalized squared distances, one per pair.
    d: Vec<f64>,
    pairs: Vec<(usize, usize)>,
    /// Nonzero coefficients of `E_p` in svec coordinates.
    coefs: Vec<Vec<(usize, f64)>>,
    /// `(a, b, s)` per svec index.
    basis: Vec<(usize, usize, f64)>,
}

const SQRT2: f64 = std::f64::consts::SQRT_2;

impl Problem {
    fn new(metric: &FiniteMetric, scale: f64) -> Self {
        let n = metric.n();
        let m = n - 1;
        let mut index = vec![vec![usize::MAX; m]; m];
        let mut basis = Vec::new();
        for a in 0..m {
            for b in a..m {
                index[a][b] = basis.len();
                index[b][a] = basis.len();
                basis.push((a, b, if a == b { 0.5 } else { 1.0 / SQRT2 }));
            }
        }
        let mut pairs = Vec::new();
        let mut d = Vec::new();
        let mut coefs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                pairs.push((i, j));
                d.push(metric.squared()[(i, j)] / scale);
                coefs.push(if i == 0 {
                    vec![(index[j - 1][j - 1], 1.0)]
                } else {
                    let (a, b) = (i - 1, j - 1);
                    vec![(index[a][a], 1.0), (index[b][b], 1.0), (index[a][b], -SQRT2)]
                });
            }
        }
        Problem { m, svec_len: basis.len(), d, pairs, coefs, basis }
    }

    fn n_vars(&self) -> usize {
        self.svec_len + 1
    }

    fn n_rows(&self) -> usize {
        2 * self.pairs.len()
    }

    fn smat(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.m, self.m);
        for (k, &(a, b, _)) in self.basis.iter().enumerate() {
            if a == b {
                out[(a, a)] = y[k];
            } else {
                out[(a, b)] = y[k] / SQRT2;
                out[(b, a)] = y[k] / SQRT2;
            }
        }
        out
    }

    /// `Aᵀ(X)`: svec of a symmetric matrix, zero in the `t` slot.
    fn svec(&self, x: &DMatrix<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.n_vars());
        for (k, &(a, b, _)) in self.basis.iter().enumerate() {
            out[k] = if a == b { x[(a, a)] } else { SQRT2 * 0.5 * (x[(a, b)] + x[(b, a)]) };
        }
        out
    }

    fn e(&self, p: usize, y: &DVector<f64>) -> f64 {
        self.coefs[p].iter().map(|&(k, c)| c * y[k]).sum()
    }

    /// `G y − h`, lower rows then upper rows.
    fn slacks(&self, y: &DVector<f64>) -> DVector<f64> {
        let np = self.pairs.len();
        let t = y[self.svec_len];
        let mut out = DVector::zeros(2 * np);
        for p in 0..np {
            let e = self.e(p, y);
            out[p] = e - self.d[p];
            out[np + p] = t * self.d[p] - e;
        }
        out
    }

    /// `G v` (without the constant `h`).
    fn g_mul(&self, v: &DVector<f64>) -> DVector<f64> {
        let np = self.pairs.len();
        let t = v[self.svec_len];
        let mut out = DVector::zeros(2 * np);
        for p in 0..np {
            let e = self.e(p, v);
            out[p] = e;
            out[np + p] = t * self.d[p] - e;
        }
        out
    }

    /// `Gᵀ w`.
    fn gt_mul(&self, w: &DVector<f64>) -> DVector<f64> {
        let np = self.pairs.len();
        let mut out = DVector::zeros(self.n_vars());
        for p in 0..np {
            let diff = w[p] - w[np + p];
            for &(k, c) in &self.coefs[p] {
                out[k] += c * diff;
            }
            out[self.svec_len] += self.d[p] * w[np + p];
        }
        out
    }

    /// Schur complement `Aᵀ sym(X · W) A + Gᵀ diag(λ) G`.
    fn schur(&self, x: &DMatrix<f64>, w: &DMatrix<f64>, lambda: &DVector<f64>) -> DMatrix<f64> {
        let nv = self.n_vars();
        let s = self.svec_len;
        let mut mat = DMatrix::zeros(nv, nv);
        for k in 0..s {
            let (a, b, sk) = self.basis[k];
            for l in k..s {
                let (c, d, sl) = self.basis[l];
                let v = sk
                    * sl
                    * (x[(b, c)] * w[(d, a)] + x[(b, d)] * w[(c, a)] + x[(a, c)] * w[(d, b)] + x[(a, d)] * w[(c, b)]);
                mat[(k, l)] = v;
                mat[(l, k)] = v;
            }
        }
        let np = self.pairs.len();
        let t = s;
        for p in 0..np {
            let (lo, up) = (lambda[p], lambda[np + p]);
            let cs = &self.coefs[p];
            for &(k, ck) in cs {
                for &(l, cl) in cs {
                    mat[(k, l)] += (lo + up) * ck * cl;
                }
                mat[(k, t)] -= up * ck * self.d[p];
                mat[(t, k)] -= up * ck * self.d[p];
            }
            mat[(t, t)] += up * self.d[p] * self.d[p];
        }
        mat
    }
}

fn sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Largest `α` keeping `S + α dS ≻ 0`, with `S = LLᵀ`.
fn psd_step(chol: &Cholesky<f64, Dyn>, ds: &DMatrix<f64>) -> f64 {
    let l = chol.l();
    let linv = l.clone().try_inverse().unwrap_or_else(|| DMatrix::identity(l.nrows(), l.nrows()));
    let t = sym(&(&linv * ds * linv.transpose()));
    let lam = t.symmetric_eigenvalues().min();
    if lam < 0.0 {
        -1.0 / lam
    } else {
        f64::INFINITY
    }
}

fn lp_step(v: &DVector<f64>, dv: &DVector<f64>) -> f64 {
    v.iter()
        .zip(dv.iter())
        .filter(|(_, d)| **d < 0.0)
        .map(|(a, d)| -a / d)
        .fold(f64::INFINITY, f64::min)
}

fn chol_regularized(m: DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    if let Some(c) = Cholesky::new(m.clone()) {
        return Some(c);
    }
    let scale = m.diagonal().iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
    let mut reg = 1e-14;
    while reg < 1e-6 {
        let mut mm = m.clone();
        for i in 0..mm.nrows() {
            mm[(i, i)] += reg * scale;
        }
        if let Some(c) = Cholesky::new(mm) {
            return Some(c);
        }
        reg *= 100.0;
    }
    None
}

/// Solves the distortion program and returns matching primal and dual certificates.
pub fn solve_distortion_sdp(metric: &FiniteMetric, opts: &SdpOptions) -> Result<SdpSolution> {
    let n = metric.n();
    if n > MAX_SDP_POINTS {
        return Err(Error::InvalidParameter(format!("at most {MAX_SDP_POINTS} points are supported, got {n}")));
    }
    if n <= 1 {
        return Ok(SdpSolution {
            certificate: DistortionCertificate { t: 1.0, q: DMatrix::zeros(n, n) },
            dual: DualCertificate::new(DMatrix::zeros(n, n)),
            lower_bound: 1.0,
            iterations: 0,
        });
    }
    let scale = metric.squared().iter().fold(0.0f64, |a, v| a.max(*v));
    let prob = Problem::new(metric, scale);
    let m = prob.m;
    let s = prob.svec_len;
    let nv = prob.n_vars();
    let nr = prob.n_rows();
    let dmin = prob.d.iter().copied().fold(f64::INFINITY, f64::min);

    // Strictly feasible start: Y = 2I dominates every normalized lower bound.
    let mut y = prob.svec(&(DMatrix::identity(m, m) * 2.0));
    y[s] = 5.0 / dmin;
    let mut z = prob.slacks(&y);
    let mut x_mat = DMatrix::<f64>::identity(m, m);
    let mut x = DVector::from_element(nr, 1.0);
    let mut c = DVector::zeros(nv);
    c[s] = 1.0;
    let tau = 0.98;

    let mut iterations = 0;
    // Both repairs yield valid certificates on their own, so the best primal and
    // the best dual may come from different iterates.
    let mut best_primal: Option<DistortionCertificate> = None;
    let mut best_dual: Option<(DualCertificate, f64)> = None;
    let bracket = |p: &Option<DistortionCertificate>, d: &Option<(DualCertificate, f64)>| match (p, d) {
        (Some(p), Some((_, lo))) => p.t - lo,
        _ => f64::INFINITY,
    };
    for iter in 0..opts.max_iterations {
        iterations = iter + 1;
        let y_mat = prob.smat(&y);
        // Near the optimum the iterates can be numerically singular; the best
        // repaired certificates so far are then returned.
        let Some(y_chol) = Cholesky::new(y_mat.clone()) else {
            break;
        };
        let w = y_chol.inverse();
        let r_p = prob.slacks(&y) - &z;
        let r_d = &c - prob.svec(&x_mat) - prob.gt_mul(&x);
        let dim_total = (m + nr) as f64;
        let mu = (x_mat.component_mul(&y_mat).sum() + x.dot(&z)) / dim_total;

        let dual_obj: f64 = (0..prob.pairs.len()).map(|p| prob.d[p] * x[p]).sum();
        let gap = (y[s] - dual_obj).abs() / (1.0 + y[s].abs());
        if gap < REPAIR_GAP || iter + 1 == opts.max_iterations {
            let cert = repair_primal(&prob, &y, scale, n);
            if best_primal.as_ref().is_none_or(|b| cert.t < b.t) {
                best_primal = Some(cert);
            }
            let dual = repair_dual(&prob, &x, n);
            let lower = dual.lower_bound(metric)?.max(1.0);
            if best_dual.as_ref().is_none_or(|(_, b)| lower > *b) {
                best_dual = Some((dual, lower));
            }
            let t = best_primal.as_ref().map_or(1.0, |b| b.t);
            if bracket(&best_primal, &best_dual) <= 0.1 * opts.tol * t.max(1.0) {
                break;
            }
        }

        let lambda = x.component_div(&z);
        let Some(m_chol) = chol_regularized(prob.schur(&x_mat, &w, &lambda)) else {
            break;
        };
        let Some(x_chol) = Cholesky::new(x_mat.clone()) else {
            break;
        };

        let solve = |sigma_mu: f64,
                     corr_psd: Option<&DMatrix<f64>>,
                     corr_lp: Option<&DVector<f64>>|
         -> (DVector<f64>, DMatrix<f64>, DVector<f64>, DVector<f64>) {
            let mut r_x = &w * sigma_mu - &x_mat;
            if let Some(cp) = corr_psd {
                r_x -= cp;
            }
            let mut num = DVector::from_element(nr, sigma_mu) - x.component_mul(&z);
            if let Some(cl) = corr_lp {
                num -= cl;
            }
            let r_lp = num.component_div(&z);
            let rhs = prob.svec(&r_x) + prob.gt_mul(&(&r_lp - lambda.component_mul(&r_p))) - &r_d;
            let dy = m_chol.solve(&rhs);
            let dy_mat = prob.smat(&dy);
            let dx_mat = &r_x - sym(&(&x_mat * &dy_mat * &w));
            let dz = prob.g_mul(&dy) + &r_p;
            let dx = &r_lp - lambda.component_mul(&dz);
            (dy, dx_mat, dz, dx)
        };

        let step_lengths = |dy: &DVector<f64>, dxm: &DMatrix<f64>, dz: &DVector<f64>, dx: &DVector<f64>| {
            let ap = psd_step(&y_chol, &prob.smat(dy)).min(lp_step(&z, dz));
            let ad = psd_step(&x_chol, dxm).min(lp_step(&x, dx));
            ((tau * ap).min(1.0), (tau * ad).min(1.0))
        };

        // Predictor.
        let (dy_a, dxm_a, dz_a, dx_a) = solve(0.0, None, None);
        let (ap_a, ad_a) = step_lengths(&dy_a, &dxm_a, &dz_a, &dx_a);
        let y_aff = &y_mat + prob.smat(&dy_a) * ap_a;
        let x_aff = &x_mat + &dxm_a * ad_a;
        let mu_aff = (x_aff.component_mul(&y_aff).sum() + (&x + &dx_a * ad_a).dot(&(&z + &dz_a * ap_a))) / dim_total;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // Corrector.
        let corr_psd = sym(&(&dxm_a * prob.smat(&dy_a) * &w));
        let corr_lp = dx_a.component_mul(&dz_a);
        let (dy, dxm, dz, dx) = solve(sigma * mu, Some(&corr_psd), Some(&corr_lp));
        let (ap, ad) = step_lengths(&dy, &dxm, &dz, &dx);
        if ap < 1e-12 && ad < 1e-12 {
            break;
        }
        y += &dy * ap;
        z += &dz * ap;
        x_mat = sym(&(&x_mat + &dxm * ad));
        x += &dx * ad;
        if !y.iter().chain(x.iter()).all(|v| v.is_finite()) {
            return Err(Error::InfeasibleNumerics("non-finite iterate".into()));
        }
    }
    let certificate = best_primal.unwrap_or_else(|| repair_primal(&prob, &y, scale, n));
    let (dual, lower_bound) = match best_dual {
        Some(d) => d,
        None => {
            let dual = repair_dual(&prob, &x, n);
            let lower = dual.lower_bound(metric)?.max(1.0);
            (dual, lower)
        }
    };
    let width = certificate.t - lower_bound;
    if width > opts.tol * certificate.t.max(1.0) {
        return Err(Error::SolverDivergence(format!(
            "bracket [{lower_bound}, {}] wider than tolerance after {iterations} iterations",
            certificate.t
        )));
    }
    Ok(SdpSolution { certificate, dual, lower_bound, iterations })
}

/// Clips `Y` to the PSD cone, rescales so every lower bound holds, and reads
/// off the resulting `t`; the Gram matrix is centered and unnormalized.
fn repair_primal(prob: &Problem, y: &DVector<f64>, scale: f64, n: usize) -> DistortionCertificate {
    let m = prob.m;
    let (vals, vecs) = sorted_symmetric_eigen(&prob.smat(y));
    let clipped = DMatrix::from_fn(m, m, |i, j| (0..m).map(|k| vals[k].max(0.0) * vecs[(i, k)] * vecs[(j, k)]).sum());
    let mut q = DMatrix::zeros(n, n);
    q.view_mut((1, 1), (m, m)).copy_from(&clipped);
    // Center: J Q J leaves pairwise quantities unchanged.
    let nf = n as f64;
    let j = DMatrix::from_fn(n, n, |a, b| if a == b { 1.0 } else { 0.0 } - 1.0 / nf);
    let mut q = sym(&(&j * q * &j));
    let sq = |q: &DMatrix<f64>, i: usize, j: usize| q[(i, i)] - 2.0 * q[(i, j)] + q[(j, j)];
    let grow = prob
        .pairs
        .iter()
        .zip(&prob.d)
        .map(|(&(a, b), d)| d * scale / sq(&q, a, b))
        .fold(0.0f64, f64::max);
    q *= grow;
    let mut t = 1.0f64;
    for (&(a, b), d) in prob.pairs.iter().zip(&prob.d) {
        t = t.max(sq(&q, a, b) / (d * scale));
    }
    DistortionCertificate { t, q }
}

/// Dual matrix from the row multipliers: off-diagonal `λ_p − μ_p`, rows summing
/// to zero, shifted along `nI − 11ᵀ` until PSD.
fn repair_dual(prob: &Problem, x: &DVector<f64>, n: usize) -> DualCertificate {
    let np = prob.pairs.len();
    let mut q = DMatrix::zeros(n, n);
    for (p, &(i, j)) in prob.pairs.iter().enumerate() {
        let v = x[p] - x[np + p];
        q[(i, j)] = v;
        q[(j, i)] = v;
    }
    for i in 0..n {
        let row: f64 = q.row(i).sum();
        q[(i, i)] = -row;
    }
    let lam = sorted_symmetric_eigen(&q).0.last().copied().unwrap_or(0.0);
    let fix = (-lam).max(0.0) + 1e-14 * frobenius(&q);
    if lam < 0.0 {
        let nf = n as f64;
        q += DMatrix::from_fn(n, n, |a, b| if a == b { nf - 1.0 } else { -1.0 }) * (fix / nf);
    }
    // Exact zero row sums after the shift.
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| q[(i, j)]).sum();
        q[(i, i)] = -off;
    }
    DualCertificate::new(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn two_points_embed_isometrically() {
        let m = FiniteMetric::new(DMatrix::from_row_slice(2, 2, &[0.0, 3.0, 3.0, 0.0])).unwrap();
        let sol = solve_distortion_sdp(&m, &SdpOptions::default()).unwrap();
        assert!((sol.certificate.t - 1.0).abs() < 1e-8);
    }

    #[test]
    fn small_cycles() {
        for n in [4usize, 6] {
            let m = FiniteMetric::cycle(n).unwrap();
            let sol = solve_distortion_sdp(&m, &SdpOptions::default()).unwrap();
            let expected = n as f64 / 2.0 * (PI / n as f64).sin();
            assert!((sol.c2() - expected).abs() < 1e-6, "n={n}: {} vs {expected}", sol.c2());
            assert!(sol.certificate.check(&m).unwrap().max() < 1e-9);
            sol.dual.validate().unwrap();
            assert!(sol.lower_bound <= sol.certificate.t + 1e-12);
        }
    }

    #[test]
    fn euclidean_points_have_distortion_one() {
        let pts = [[0.0, 0.0], [1.0, 0.3], [0.2, 2.0], [-1.0, 0.5], [0.7, -0.9]];
        let d = DMatrix::from_fn(5, 5, |i, j| crate::linalg::dist_sq(&pts[i], &pts[j]));
        let m = FiniteMetric::new(d).unwrap();
        let sol = solve_distortion_sdp(&m, &SdpOptions::default()).unwrap();
        assert!((sol.certificate.t - 1.0).abs() < 1e-7);
    }

    #[test]
    fn star_bracket_is_tight() {
        let mut d = DMatrix::from_element(4, 4, 4.0);
        for i in 0..4 {
            d[(i, i)] = 0.0;
        }
        for j in 1..4 {
            d[(0, j)] = 1.0;
            d[(j, 0)] = 1.0;
        }
        let m = FiniteMetric::new(d).unwrap();
        let sol = solve_distortion_sdp(&m, &SdpOptions::default()).unwrap();
        assert!(sol.certificate.t - sol.lower_bound <= 1e-8 * sol.certificate.t);
        assert!(sol.certificate.t > 1.0);
    }
}
