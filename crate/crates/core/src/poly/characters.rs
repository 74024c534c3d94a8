use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const ROOT_TOL: f64 = 1e-10;

/// Characters of a finite abelian group acting diagonally on `C^d`.
///
/// The group is `Z/o_1 × ... × Z/o_r` with one generator per cyclic factor.
/// Row `i` records `χ_i(h_k)` for each generator `h_k`; every other value is
/// determined multiplicatively.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    orders: Vec<usize>,
    generator_values: Vec<Vec<Complex64>>,
}

impl CharacterTable {
    pub fn new(orders: Vec<usize>, generator_values: Vec<Vec<Complex64>>) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidGroup("generator order must be positive".into()));
        }
        for row in &generator_values {
            if row.len() != orders.len() {
                return Err(Error::InvalidGroup(format!(
                    "character row has {} generator values, expected {}",
                    row.len(),
                    orders.len()
                )));
            }
            for (k, v) in row.iter().enumerate() {
                if (v.norm() - 1.0).abs() > ROOT_TOL {
                    return Err(Error::InvalidGroup(format!("character value {v} is not unit modulus")));
                }
                if (v.powu(orders[k] as u32) - 1.0).norm() > 1e-9 {
                    return Err(Error::InvalidGroup(format!(
                        "character value {v} is not an order-{} root of unity",
                        orders[k]
                    )));
                }
            }
        }
        Ok(CharacterTable { orders, generator_values })
    }

    /// Infers each generator's order as the least common order of its values.
    pub fn infer_orders(generator_values: Vec<Vec<Complex64>>) -> Result<Self> {
        let gens = generator_values.first().map_or(0, |r| r.len());
        let mut orders = Vec::with_capacity(gens);
        for k in 0..gens {
            let order = (1..=10_000usize)
                .find(|&o| {
                    generator_values
                        .iter()
                        .all(|row| row.get(k).is_some_and(|v| (v.powu(o as u32) - 1.0).norm() < 1e-9))
                })
                .ok_or_else(|| Error::InvalidGroup(format!("generator {k} has no finite order")))?;
            orders.push(order);
        }
        CharacterTable::new(orders, generator_values)
    }

    /// Cyclic group of the given order acting by `diag(ω^{e_1}, ..., ω^{e_d})`,
    /// `ω = e^{2πi/order}`.
    pub fn cyclic(order: usize, exponents: &[i64]) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGroup("order must be positive".into()));
        }
        let rows = exponents
            .iter()
            .map(|&e| vec![Complex64::from_polar(1.0, 2.0 * PI * e as f64 / order as f64)])
            .collect();
        CharacterTable::new(vec![order], rows)
    }

    /// The trivial group acting on `C^d`.
    pub fn trivial(d: usize) -> Self {
        CharacterTable { orders: Vec::new(), generator_values: vec![Vec::new(); d] }
    }

    pub fn dim(&self) -> usize {
        self.generator_values.len()
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn generator_values(&self) -> &[Vec<Complex64>] {
        &self.generator_values
    }

    pub fn group_order(&self) -> usize {
        self.orders.iter().product()
    }

    /// All group elements as exponent tuples over the generators, identity first.
    pub fn elements(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for &o in &self.orders {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..o).map(move |e| {
                        let mut p = prefix.clone();
                        p.push(e);
                        p
                    })
                })
                .collect();
        }
        out
    }

    /// `χ_i(g)` for the element with the given exponent tuple.
    pub fn value(&self, i: usize, element: &[usize]) -> Complex64 {
        self.generator_values[i]
            .iter()
            .zip(element)
            .map(|(v, &e)| v.powu(e as u32))
            .product()
    }

    /// Full `d × |G|` table, columns in [`Self::elements`] order.
    pub fn table(&self) -> Vec<Vec<Complex64>> {
        let elements = self.elements();
        (0..self.dim())
            .map(|i| elements.iter().map(|g| self.value(i, g)).collect())
            .collect()
    }

    /// Diagonal of the action of each element, in [`Self::elements`] order.
    pub fn diagonals(&self) -> Vec<Vec<Complex64>> {
        self.elements()
            .iter()
            .map(|g| (0..self.dim()).map(|i| self.value(i, g)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_are_multiplicative() {
        let t = CharacterTable::new(
            vec![4, 2],
            vec![
                vec![Complex64::i(), Complex64::new(-1.0, 0.0)],
                vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)],
            ],
        )
        .unwrap();
        let elements = t.elements();
        assert_eq!(elements.len(), 8);
        for i in 0..t.dim() {
            for g in &elements {
                for h in &elements {
                    let gh: Vec<usize> = g
                        .iter()
                        .zip(h)
                        .zip(t.orders())
                        .map(|((a, b), o)| (a + b) % o)
                        .collect();
                    let lhs = t.value(i, &gh);
                    let rhs = t.value(i, g) * t.value(i, h);
                    assert!((lhs - rhs).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn rejects_non_roots() {
        assert!(CharacterTable::new(vec![3], vec![vec![Complex64::i()]]).is_err());
        assert!(CharacterTable::new(vec![2], vec![vec![Complex64::new(2.0, 0.0)]]).is_err());
    }

    #[test]
    fn infers_order_of_i_minus_i() {
        let t = CharacterTable::infer_orders(vec![vec![Complex64::i()], vec![-Complex64::i()]]).unwrap();
        assert_eq!(t.orders(), &[4]);
        assert_eq!(t.group_order(), 4);
    }
}
