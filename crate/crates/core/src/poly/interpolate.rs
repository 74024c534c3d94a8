use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{check_dim, Error, Result};
use crate::linalg::dist;
use crate::poly::multipoly::{MultiPoly, MAX_DEGREE};
use crate::quotient::GroupAction;

/// Minimum separation of interpolation nodes, before and after the change of coordinates.
pub const NODE_SEPARATION: f64 = 1e-8;
/// Number of random coordinate changes tried before giving up.
pub const MAX_GENERIC_DRAWS: usize = 32;

const DEFAULT_SEED: u64 = 0x5eed;

/// Monomial coefficients (ascending) of the interpolant through `(nodes[i], values[i])`.
///
/// Basis polynomials are `w_i Π_{j≠i} (y − y_j)` with barycentric weights
/// `w_i = 1 / Π_{j≠i} (y_i − y_j)`, each obtained from the node polynomial by
/// synthetic division.
fn lagrange_coefficients(nodes: &[f64], values: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    // Node polynomial Π (y − y_j), ascending coefficients.
    let mut full = vec![1.0];
    for &y in nodes {
        let mut next = vec![0.0; full.len() + 1];
        for (k, &c) in full.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * y;
        }
        full = next;
    }
    let mut out = vec![0.0; n];
    for i in 0..n {
        let w: f64 = 1.0 / (0..n).filter(|&j| j != i).map(|j| nodes[i] - nodes[j]).product::<f64>();
        // Divide the node polynomial by (y − y_i).
        let mut quot = vec![0.0; n];
        let mut carry = 0.0;
        for k in (1..=n).rev() {
            carry = full[k] + carry * nodes[i];
            quot[k - 1] = carry;
        }
        for k in 0..n {
            out[k] += values[i] * w * quot[k];
        }
    }
    out
}

fn has_distinct_coordinates(mapped: &[DVector<f64>]) -> bool {
    let d = mapped.first().map_or(0, |v| v.len());
    (0..d).all(|k| {
        let mut c: Vec<f64> = mapped.iter().map(|v| v[k]).collect();
        c.sort_by(f64::total_cmp);
        c.windows(2).all(|w| w[1] - w[0] > NODE_SEPARATION)
    })
}

/// Polynomial `p` with `∇p(points[i]) = gradients[i]` for every `i`.
///
/// After a generic linear change of coordinates `y = A x` every coordinate of
/// the nodes is distinct, so a separable `p̄(y) = Σ_k P_k(y_k)` with each `P_k'`
/// a univariate Lagrange interpolant works; then `p = p̄ ∘ A`.
pub fn gradient_interpolate(points: &[Vec<f64>], gradients: &[Vec<f64>]) -> Result<MultiPoly> {
    gradient_interpolate_seeded(points, gradients, DEFAULT_SEED)
}

pub fn gradient_interpolate_seeded(points: &[Vec<f64>], gradients: &[Vec<f64>], seed: u64) -> Result<MultiPoly> {
    if points.len() != gradients.len() {
        return Err(Error::DimensionMismatch { expected: points.len(), got: gradients.len() });
    }
    let Some(first) = points.first() else {
        return Err(Error::DegeneratePoints("no interpolation points".into()));
    };
    let d = first.len();
    for (u, v) in points.iter().zip(gradients) {
        check_dim(d, u.len())?;
        check_dim(d, v.len())?;
    }
    if points.len() as u32 > MAX_DEGREE {
        return Err(Error::InvalidParameter(format!("at most {MAX_DEGREE} points are supported")));
    }
    for i in 0..points.len() {
        for j in 0..i {
            if dist(&points[i], &points[j]) <= NODE_SEPARATION {
                return Err(Error::DegeneratePoints(format!("points {j} and {i} coincide")));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_GENERIC_DRAWS {
        let a = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let Some(a_inv) = a.clone().try_inverse() else { continue };
        let mapped: Vec<DVector<f64>> = points.iter().map(|u| &a * DVector::from_column_slice(u)).collect();
        if !has_distinct_coordinates(&mapped) {
            continue;
        }
        // ∇p(x) = Aᵀ ∇p̄(Ax), so p̄ must have gradient A^{-T} v at A u.
        let a_inv_t = a_inv.transpose();
        let bar_grads: Vec<DVector<f64>> =
            gradients.iter().map(|v| &a_inv_t * DVector::from_column_slice(v)).collect();
        let mut p = MultiPoly::zero(d);
        for k in 0..d {
            let nodes: Vec<f64> = mapped.iter().map(|y| y[k]).collect();
            let vals: Vec<f64> = bar_grads.iter().map(|g| g[k]).collect();
            let deriv = lagrange_coefficients(&nodes, &vals);
            // Antiderivative with zero constant term.
            let mut anti = vec![0.0; deriv.len() + 1];
            for (m, c) in deriv.iter().enumerate() {
                anti[m + 1] = c / (m + 1) as f64;
            }
            let form = MultiPoly::linear(&a.row(k).iter().copied().collect::<Vec<_>>());
            p = p.add(&MultiPoly::univariate_of(&anti, &form)?);
        }
        return Ok(p);
    }
    Err(Error::DegeneratePoints(format!(
        "no generic coordinate change found in {MAX_GENERIC_DRAWS} draws"
    )))
}

/// `(1/|G|) Σ_g p ∘ g`.
pub fn reynolds_average(p: &MultiPoly, group: &GroupAction) -> Result<MultiPoly> {
    let mats = group.matrices()?;
    check_dim(mats[0].nrows(), p.dim())?;
    let mut acc = MultiPoly::zero(p.dim());
    for g in &mats {
        acc = acc.add(&p.compose_linear(g)?);
    }
    Ok(acc.scale(1.0 / mats.len() as f64))
}

/// Invariant polynomial map `p_u: R^d → R^d` with `Dp_u(u) = id`.
///
/// Component `i` interpolates `∇q(g·u) = g e_i` over the orbit and is then
/// averaged over the group, so `∇(q ∘ g)(u) = gᵀ g e_i = e_i` for each term.
pub fn local_immersion_poly(group: &GroupAction, u: &[f64]) -> Result<Vec<MultiPoly>> {
    group.check_vector(u)?;
    let mats = group.matrices()?;
    let d = u.len();
    let orbit: Vec<Vec<f64>> = mats.iter().map(|g| crate::linalg::mat_vec(g, u)).collect();
    for i in 0..orbit.len() {
        for j in 0..i {
            if dist(&orbit[i], &orbit[j]) <= NODE_SEPARATION {
                return Err(Error::NotFree(format!("orbit points {j} and {i} coincide")));
            }
        }
    }
    (0..d)
        .map(|i| {
            let grads: Vec<Vec<f64>> = mats.iter().map(|g| g.column(i).iter().copied().collect()).collect();
            let q = gradient_interpolate(&orbit, &grads)?;
            reynolds_average(&q, group)
        })
        .collect()
}
