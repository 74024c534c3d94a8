//! Small dense vector helpers shared by the rest of the crate.
//!
//! Complex vectors are stored as interleaved real slices `[re0, im0, re1, im1, ...]`;
//! the real inner product of two such slices is the real part of the complex one.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist_sq(a, b).sqrt()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Reads an interleaved slice as complex numbers.
pub fn as_complex(a: &[f64]) -> Vec<Complex64> {
    a.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

pub fn from_complex(z: &[Complex64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// Complex inner product `Σ conj(a_i) b_i` of two interleaved slices.
pub fn cdot(a: &[f64], b: &[f64]) -> Complex64 {
    a.chunks_exact(2)
        .zip(b.chunks_exact(2))
        .map(|(x, y)| Complex64::new(x[0], -x[1]) * Complex64::new(y[0], y[1]))
        .sum()
}

/// Multiplies every complex entry of an interleaved slice by `w`.
pub fn cscale(a: &[f64], w: Complex64) -> Vec<f64> {
    a.chunks_exact(2)
        .flat_map(|c| {
            let z = Complex64::new(c[0], c[1]) * w;
            [z.re, z.im]
        })
        .collect()
}

pub fn mat_vec(m: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    (m * DVector::from_column_slice(x)).as_slice().to_vec()
}

/// Eigen-decomposition of a symmetric matrix with eigenvalues sorted descending.
pub fn sorted_symmetric_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Double centering `-(1/2) J D J` with `J = I - 11ᵀ/n`.
pub fn double_center(d: &DMatrix<f64>) -> DMatrix<f64> {
    let n = d.nrows();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let nf = n as f64;
    let row_means: Vec<f64> = (0..n).map(|i| d.row(i).sum() / nf).collect();
    let col_means: Vec<f64> = (0..n).map(|j| d.column(j).sum() / nf).collect();
    let total = d.sum() / (nf * nf);
    DMatrix::from_fn(n, n, |i, j| -0.5 * (d[(i, j)] - row_means[i] - col_means[j] + total))
}

pub fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}
