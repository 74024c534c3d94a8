use std::sync::Arc;

use num_complex::Complex64;

use crate::embeddings::InvariantMap;
use crate::error::{check_dim, Error, Result};
use crate::linalg::as_complex;
use crate::poly::CharacterTable;
use crate::quotient::GroupAction;

const UNITY_TOL: f64 = 1e-9;

/// Outcome of the exponent search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbelianExponents {
    /// `m[i][j]` is the least `m ≥ 0` with `χ_i χ_j^m = 1`.
    Found(Vec<Vec<usize>>),
    /// No exponent exists for the pair `(i, j)`; the action is not free on the sphere.
    FreenessFailure { i: usize, j: usize },
}

fn is_one(z: Complex64) -> bool {
    (z - 1.0).norm() <= UNITY_TOL
}

/// Least exponents `m_ij ∈ {0, …, |G|−1}` with `χ_i χ_j^{m_ij}` trivial.
///
/// A character is trivial iff it is trivial on every generator, so the check
/// runs over generator values only.
pub fn abelian_exponents(table: &CharacterTable) -> AbelianExponents {
    let d = table.dim();
    let order = table.group_order();
    let vals = table.generator_values();
    let mut m = vec![vec![0; d]; d];
    for i in 0..d {
        for j in 0..d {
            let found = (0..order).find(|&e| {
                vals[i].iter().zip(&vals[j]).all(|(a, b)| is_one(a * b.powu(e as u32)))
            });
            match found {
                Some(e) => m[i][j] = e,
                None => return AbelianExponents::FreenessFailure { i, j },
            }
        }
    }
    AbelianExponents::Found(m)
}

/// True iff no element acting as a nonidentity matrix fixes a unit vector,
/// i.e. every character is nontrivial on every such element.
pub fn acts_freely_on_sphere(table: &CharacterTable) -> bool {
    let d = table.dim();
    table
        .elements()
        .iter()
        .filter(|g| !(0..d).all(|i| is_one(table.value(i, g))))
        .all(|g| (0..d).all(|i| !is_one(table.value(i, g))))
}

/// `x ↦ (x_i x_j^{m_ij})_{i,j}` on `C^d`, with `d²` interleaved complex outputs.
pub fn abelian_invariant(table: &CharacterTable, exponents: &[Vec<usize>]) -> Result<InvariantMap> {
    let d = table.dim();
    check_dim(d, exponents.len())?;
    for row in exponents {
        check_dim(d, row.len())?;
    }
    if exponents.iter().flatten().any(|&e| e >= table.group_order().max(1)) {
        return Err(Error::InvalidParameter("exponent outside {0, …, |G|−1}".into()));
    }
    let m: Vec<Vec<u32>> = exponents.iter().map(|r| r.iter().map(|&e| e as u32).collect()).collect();
    let action = Arc::new(GroupAction::diagonal_unitary(table.clone()));
    Ok(InvariantMap::new("abelian", action, 2 * d * d, move |x| {
        let z = as_complex(x);
        Ok((0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .flat_map(|(i, j)| {
                let w = z[i] * z[j].powu(m[i][j]);
                [w.re, w.im]
            })
            .collect())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[Complex64]) -> CharacterTable {
        CharacterTable::infer_orders(values.iter().map(|&v| vec![v]).collect()).unwrap()
    }

    #[test]
    fn sign_group_exponents_are_ones() {
        let t = diag(&[Complex64::new(-1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        assert_eq!(abelian_exponents(&t), AbelianExponents::Found(vec![vec![1, 1], vec![1, 1]]));
        assert!(acts_freely_on_sphere(&t));
    }

    #[test]
    fn i_minus_i() {
        let t = diag(&[Complex64::i(), -Complex64::i()]);
        assert_eq!(abelian_exponents(&t), AbelianExponents::Found(vec![vec![3, 1], vec![1, 3]]));
        assert!(acts_freely_on_sphere(&t));
    }

    #[test]
    fn one_minus_one_is_not_free() {
        let t = diag(&[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        assert!(matches!(abelian_exponents(&t), AbelianExponents::FreenessFailure { .. }));
        assert!(!acts_freely_on_sphere(&t));
    }

    #[test]
    fn trivial_group_is_free() {
        let t = CharacterTable::trivial(2);
        assert!(acts_freely_on_sphere(&t));
        assert_eq!(abelian_exponents(&t), AbelianExponents::Found(vec![vec![0, 0], vec![0, 0]]));
    }

    #[test]
    fn r2_invariant_is_pairwise_products() {
        let t = diag(&[Complex64::new(-1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        let AbelianExponents::Found(m) = abelian_exponents(&t) else { panic!() };
        let f = abelian_invariant(&t, &m).unwrap();
        let x = [0.3, -0.2, 1.1, 0.5];
        let z = as_complex(&x);
        let y = f.eval(&x).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let w = z[i] * z[j];
                assert!((y[2 * (2 * i + j)] - w.re).abs() < 1e-15);
                assert!((y[2 * (2 * i + j) + 1] - w.im).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn invariant_is_invariant() {
        let t = diag(&[Complex64::i(), -Complex64::i()]);
        let AbelianExponents::Found(m) = abelian_exponents(&t) else { panic!() };
        let f = abelian_invariant(&t, &m).unwrap();
        let x = [0.3, -0.2, 1.1, 0.5];
        let y = f.eval(&x).unwrap();
        for k in 0..4 {
            let gx = f.action().apply(k, &x).unwrap();
            let gy = f.eval(&gx).unwrap();
            assert!(y.iter().zip(&gy).all(|(a, b)| (a - b).abs() < 1e-12));
        }
    }
}
