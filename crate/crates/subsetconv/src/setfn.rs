//! Dense set functions on the subset lattice of {0, …, n−1}, stored as a
//! table of 2^n values indexed by bitmask.

use crate::error::{Error, Result};

pub const MAX_GROUND_SET: u32 = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunction<V> {
    n: u32,
    values: Vec<V>,
}

impl<V> SetFunction<V> {
    pub fn new(n: u32, values: Vec<V>) -> Result<Self> {
        if n > MAX_GROUND_SET {
            return Err(Error::OrderTooLarge(n, MAX_GROUND_SET));
        }
        if values.len() != 1usize << n {
            return Err(Error::DimensionMismatch(n, values.len() as u32));
        }
        Ok(SetFunction { n, values })
    }

    pub fn from_fn(n: u32, f: impl FnMut(u32) -> V) -> Result<Self> {
        if n > MAX_GROUND_SET {
            return Err(Error::OrderTooLarge(n, MAX_GROUND_SET));
        }
        let values = (0..1u32 << n).map(f).collect();
        Ok(SetFunction { n, values })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of table entries, 2^n.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn full_mask(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [V] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<V> {
        self.values
    }

    pub fn map<U>(&self, f: impl FnMut(&V) -> U) -> SetFunction<U> {
        SetFunction { n: self.n, values: self.values.iter().map(f).collect() }
    }

    /// Checks both operands live on the same ground set.
    pub fn same_domain<U>(&self, other: &SetFunction<U>) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }
}

impl<V: Clone> SetFunction<V> {
    pub fn constant(n: u32, v: V) -> Result<Self> {
        Self::new(n, vec![v; 1usize << n])
    }
}

impl<V> std::ops::Index<u32> for SetFunction<V> {
    type Output = V;
    fn index(&self, mask: u32) -> &V {
        &self.values[mask as usize]
    }
}

impl<V> std::ops::IndexMut<u32> for SetFunction<V> {
    fn index_mut(&mut self, mask: u32) -> &mut V {
        &mut self.values[mask as usize]
    }
}

/// Iterates the submasks of `mask` in descending numeric order, including
/// `mask` itself and 0.
pub fn submasks(mask: u32) -> Submasks {
    Submasks { mask, cur: mask, done: false }
}

pub struct Submasks {
    mask: u32,
    cur: u32,
    done: bool,
}

impl Iterator for Submasks {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.done {
            return None;
        }
        let out = self.cur;
        if self.cur == 0 {
            self.done = true;
        } else {
            self.cur = (self.cur - 1) & self.mask;
        }
        Some(out)
    }
}
