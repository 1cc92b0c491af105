//! Arithmetic modulo the Mersenne prime 2^61 − 1, and the ring abstraction
//! shared with the polynomial coefficient domain.

/// Commutative ring over which the ranked sum-product convolution runs.
pub trait Ring: Clone {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

pub const M61: u64 = (1 << 61) - 1;

/// Element of Z / (2^61 − 1), stored reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mod61(u64);

impl Mod61 {
    pub fn new(v: u64) -> Self {
        Mod61(v % M61)
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl Ring for Mod61 {
    fn zero() -> Self {
        Mod61(0)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn add(&self, other: &Self) -> Self {
        let s = self.0 + other.0;
        Mod61(if s >= M61 { s - M61 } else { s })
    }

    fn sub(&self, other: &Self) -> Self {
        Mod61(if self.0 >= other.0 { self.0 - other.0 } else { self.0 + M61 - other.0 })
    }

    fn mul(&self, other: &Self) -> Self {
        let p = self.0 as u128 * other.0 as u128;
        // Mersenne reduction: p = hi·2^61 + lo ≡ hi + lo.
        let lo = (p & M61 as u128) as u64;
        let hi = (p >> 61) as u64;
        let s = lo + hi;
        Mod61(if s >= M61 { s - M61 } else { s })
    }
}
