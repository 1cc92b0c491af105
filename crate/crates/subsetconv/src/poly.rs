//! Sparse univariate polynomials over Z / (2^61 − 1).
//!
//! Encoding a value v as x^v turns (min, +) into "multiply, read the least
//! surviving degree" and (max, +) into the greatest-degree variant. Counts of
//! witnessing pairs stay below 3^n < 2^61, so a coefficient vanishes mod the
//! prime iff no pair attains that degree.

use crate::modular::{Mod61, Ring};

/// Polynomial stored as (degree, coefficient) terms, strictly ascending by
/// degree, with no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    terms: Vec<(u32, Mod61)>,
}

impl SparsePoly {
    pub fn monomial(degree: u32) -> Self {
        SparsePoly { terms: vec![(degree, Mod61::new(1))] }
    }

    pub fn terms(&self) -> &[(u32, Mod61)] {
        &self.terms
    }

    pub fn least_degree(&self) -> Option<u32> {
        self.terms.first().map(|&(d, _)| d)
    }

    pub fn greatest_degree(&self) -> Option<u32> {
        self.terms.last().map(|&(d, _)| d)
    }

    fn merge(&self, other: &Self, combine: impl Fn(&Mod61, &Mod61) -> Mod61, rhs_only: impl Fn(&Mod61) -> Mod61) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ta = self.terms.get(i);
            let tb = other.terms.get(j);
            let (d, c) = match (ta, tb) {
                (Some(&(da, ca)), Some(&(db, cb))) if da == db => {
                    i += 1;
                    j += 1;
                    (da, combine(&ca, &cb))
                }
                (Some(&(da, ca)), Some(&(db, _))) if da < db => {
                    i += 1;
                    (da, ca)
                }
                (Some(&(da, ca)), None) => {
                    i += 1;
                    (da, ca)
                }
                (_, Some(&(db, cb))) => {
                    j += 1;
                    (db, rhs_only(&cb))
                }
                (None, None) => unreachable!(),
            };
            if !c.is_zero() {
                terms.push((d, c));
            }
        }
        SparsePoly { terms }
    }
}

impl Ring for SparsePoly {
    fn zero() -> Self {
        SparsePoly { terms: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        self.merge(other, |a, b| a.add(b), |b| *b)
    }

    fn sub(&self, other: &Self) -> Self {
        self.merge(other, |a, b| a.sub(b), |b| Mod61::zero().sub(b))
    }

    fn mul(&self, other: &Self) -> Self {
        if self.terms.is_empty() || other.terms.is_empty() {
            return SparsePoly::zero();
        }
        let top = self.terms.last().unwrap().0 as usize + other.terms.last().unwrap().0 as usize;
        let mut dense = vec![Mod61::zero(); top + 1];
        for &(da, ca) in &self.terms {
            for &(db, cb) in &other.terms {
                let d = da as usize + db as usize;
                dense[d] = dense[d].add(&ca.mul(&cb));
            }
        }
        let terms = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| (d as u32, c))
            .collect();
        SparsePoly { terms }
    }
}
