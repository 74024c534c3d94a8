use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Coefficients at or below this magnitude are dropped.
pub const COEFF_PRUNE_TOL: f64 = 1e-14;
/// Largest total degree a polynomial may reach.
pub const MAX_DEGREE: u32 = 64;

/// Sparse real polynomial in `dim` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    dim: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

/// JSON term list: `{"dim": d, "terms": [{"exponents": [...], "coefficient": c}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiPolyFile {
    pub dim: usize,
    pub terms: Vec<TermFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermFile {
    pub exponents: Vec<u32>,
    pub coefficient: f64,
}

fn ipow(x: f64, e: u32) -> f64 {
    x.powi(e as i32)
}

impl MultiPoly {
    pub fn zero(dim: usize) -> Self {
        MultiPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn variable(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        let mut p = Self::zero(dim);
        p.add_term(e, 1.0);
        p
    }

    /// `Σ_j a_j x_j`.
    pub fn linear(a: &[f64]) -> Self {
        let mut p = Self::zero(a.len());
        for (j, &c) in a.iter().enumerate() {
            let mut e = vec![0; a.len()];
            e[j] = 1;
            p.add_term(e, c);
        }
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Vec<u32>, f64)>) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            check_dim(dim, e.len())?;
            if e.iter().sum::<u32>() > MAX_DEGREE {
                return Err(Error::InvalidParameter(format!("degree exceeds {MAX_DEGREE}")));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: f64) {
        let v = self.terms.get(&e).copied().unwrap_or(0.0) + c;
        if v.abs() <= COEFF_PRUNE_TOL {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    fn prune(mut self) -> Self {
        self.terms.retain(|_, c| c.abs() > COEFF_PRUNE_TOL);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    pub fn coefficient(&self, exponents: &[u32]) -> f64 {
        self.terms.get(exponents).copied().unwrap_or(0.0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(x).map(|(&k, &v)| ipow(v, k)).product::<f64>())
            .sum()
    }

    pub fn partial(&self, i: usize) -> MultiPoly {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * e[i] as f64);
            }
        }
        out
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim];
        for (e, c) in &self.terms {
            for i in 0..self.dim {
                if e[i] == 0 {
                    continue;
                }
                let mut prod = c * e[i] as f64;
                for (j, (&k, &v)) in e.iter().zip(x).enumerate() {
                    prod *= if j == i { ipow(v, k - 1) } else { ipow(v, k) };
                }
                g[i] += prod;
            }
        }
        g
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            *out.terms.entry(e.clone()).or_insert(0.0) += c;
        }
        out.prune()
    }

    pub fn scale(&self, s: f64) -> MultiPoly {
        MultiPoly { dim: self.dim, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }.prune()
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        if self.degree() + other.degree() > MAX_DEGREE && !self.is_zero() && !other.is_zero() {
            return Err(Error::InvalidParameter(format!("product degree exceeds {MAX_DEGREE}")));
        }
        let mut out: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *out.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        Ok(MultiPoly { dim: self.dim, terms: out }.prune())
    }

    /// Univariate polynomial `Σ_k coeffs[k] ℓ^k` of a linear form `ℓ`.
    pub fn univariate_of(coeffs: &[f64], form: &MultiPoly) -> Result<MultiPoly> {
        // Horner evaluation in the polynomial ring.
        let mut acc = MultiPoly::zero(form.dim);
        for &c in coeffs.iter().rev() {
            acc = acc.mul(form)?.add(&MultiPoly::constant(form.dim, c));
        }
        Ok(acc)
    }

    /// `x ↦ p(M x)` for a square matrix `M`.
    pub fn compose_linear(&self, m: &DMatrix<f64>) -> Result<MultiPoly> {
        check_dim(self.dim, m.nrows())?;
        let d = m.ncols();
        let rows: Vec<MultiPoly> = (0..self.dim)
            .map(|i| MultiPoly::linear(&m.row(i).iter().copied().collect::<Vec<_>>()))
            .collect();
        // Cache powers of each row form.
        let max_exp: Vec<u32> = (0..self.dim)
            .map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
            .collect();
        let mut powers: Vec<Vec<MultiPoly>> = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut p = vec![MultiPoly::constant(d, 1.0)];
            for k in 1..=max_exp[i] as usize {
                let next = p[k - 1].mul(&rows[i])?;
                p.push(next);
            }
            powers.push(p);
        }
        let mut out = MultiPoly::zero(d);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(d, *c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&powers[i][k as usize])?;
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    pub fn to_file(&self) -> MultiPolyFile {
        MultiPolyFile {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermFile { exponents: e.clone(), coefficient: *c })
                .collect(),
        }
    }

    pub fn from_file(f: &MultiPolyFile) -> Result<Self> {
        Self::from_terms(f.dim, f.terms.iter().map(|t| (t.exponents.clone(), t.coefficient)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("polynomial serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }
}
