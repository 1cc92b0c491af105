//! Nonnegative binary floating point with a 64-bit mantissa and a wide
//! (i64) exponent. The min-max ↔ approximate min-sum equivalence encodes
//! values as t^rank, whose exponents overflow f64 long before the mantissa
//! precision matters; comparisons here are exact and arithmetic rounds to
//! nearest with ≤ 1 ulp error.

use std::cmp::Ordering;
use std::ops::Add;

use num_traits::Zero;

use crate::value::ApproxScalar;

/// Value = mantissa · 2^(exponent − 63); mantissa is normalized (top bit
/// set) unless the value is zero, in which case both fields are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApproxFloat {
    mantissa: u64,
    exponent: i64,
}

impl ApproxFloat {
    pub const ZERO: ApproxFloat = ApproxFloat { mantissa: 0, exponent: 0 };

    pub fn from_u128(v: u128) -> Self {
        if v == 0 {
            return Self::ZERO;
        }
        let top = 127 - v.leading_zeros() as i64; // bit index of the MSB
        if top <= 63 {
            ApproxFloat { mantissa: (v as u64) << (63 - top), exponent: top }
        } else {
            let shift = top - 63;
            let kept = (v >> shift) as u64;
            let round_up = (v >> (shift - 1)) & 1 == 1;
            Self::normalized(kept as u128 + round_up as u128, top)
        }
    }

    /// Builds from a mantissa-like integer m ∈ [2^63, 2^65) meaning
    /// m · 2^(exp − 63), renormalizing.
    fn normalized(m: u128, exp: i64) -> Self {
        debug_assert!(m >= 1 << 63 && m < 1 << 65);
        if m >= 1 << 64 {
            let round_up = m & 1 == 1;
            let m2 = (m >> 1) + round_up as u128;
            if m2 >= 1 << 64 {
                ApproxFloat { mantissa: (m2 >> 1) as u64, exponent: exp + 2 }
            } else {
                ApproxFloat { mantissa: m2 as u64, exponent: exp + 1 }
            }
        } else {
            ApproxFloat { mantissa: m as u64, exponent: exp }
        }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.mantissa == 0 || other.mantissa == 0 {
            return Self::ZERO;
        }
        let p = self.mantissa as u128 * other.mantissa as u128; // in [2^126, 2^128)
        let exp = self.exponent + other.exponent;
        // p·2^(e1+e2−126) = (p >> s)·2^(e1+e2−126+s)
        if p >= 1 << 127 {
            let round_up = (p >> 62) & 1 == 1;
            Self::normalized((p >> 63) + round_up as u128, exp)
        } else {
            let round_up = (p >> 61) & 1 == 1;
            Self::normalized((p >> 62) + round_up as u128, exp - 1)
        }
    }

    pub fn div(self, other: Self) -> Self {
        assert!(other.mantissa != 0, "division by zero");
        if self.mantissa == 0 {
            return Self::ZERO;
        }
        // (m1·2^63) / m2 ∈ (2^62, 2^64); one doubling fixes the low case.
        let num = (self.mantissa as u128) << 63;
        let mut q = num / other.mantissa as u128;
        let mut exp = self.exponent - other.exponent;
        if q < 1 << 63 {
            q = (num << 1) / other.mantissa as u128;
            exp -= 1;
        }
        Self::normalized(q, exp)
    }

    /// Integer power by squaring; ≤ 2·log2(r) rounded multiplications.
    pub fn pow(self, mut r: u64) -> Self {
        let mut base = self;
        let mut acc = ApproxFloat::from_u128(1);
        while r > 0 {
            if r & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            r >>= 1;
        }
        acc
    }

    /// log2 as f64; exact enough to place a value between far-apart powers.
    pub fn log2_f64(self) -> f64 {
        assert!(self.mantissa != 0);
        self.exponent as f64 + (self.mantissa as f64 / (1u64 << 63) as f64).log2()
    }

    /// (mantissa, exponent) per the struct docs; value = mantissa · 2^(exponent − 63).
    pub fn parts(self) -> (u64, i64) {
        (self.mantissa, self.exponent)
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == 0
    }
}

impl PartialOrd for ApproxFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ApproxFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.mantissa == 0, other.mantissa == 0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => (self.exponent, self.mantissa).cmp(&(other.exponent, other.mantissa)),
        }
    }
}

impl Add for ApproxFloat {
    type Output = ApproxFloat;
    fn add(self, other: Self) -> Self {
        let (big, small) = if self >= other { (self, other) } else { (other, self) };
        if small.mantissa == 0 {
            return big;
        }
        let shift = big.exponent - small.exponent;
        if shift > 64 {
            return big;
        }
        let aligned = small.mantissa as u128 >> shift;
        let round_up = shift > 0 && (small.mantissa >> (shift - 1)) & 1 == 1;
        Self::normalized(big.mantissa as u128 + aligned + round_up as u128, big.exponent)
    }
}

impl Zero for ApproxFloat {
    fn zero() -> Self {
        Self::ZERO
    }
    fn is_zero(&self) -> bool {
        self.mantissa == 0
    }
}

impl ApproxScalar for ApproxFloat {
    fn from_u64(v: u64) -> Self {
        Self::from_u128(v as u128)
    }

    fn two_pow(e: i32) -> Self {
        ApproxFloat { mantissa: 1 << 63, exponent: e as i64 }
    }

    fn log2_floor(self) -> i32 {
        assert!(self.mantissa != 0);
        i32::try_from(self.exponent).expect("exponent out of i32 range")
    }

    fn mul_ratio(self, num: u128, den: u128) -> Self {
        self.mul(Self::from_u128(num)).div(Self::from_u128(den))
    }

    fn ceil_ratio_u64(self, num: u128, den: u128) -> u64 {
        self.ratio_to_u64(num, den, true)
    }

    fn floor_ratio_u64(self, num: u128, den: u128) -> u64 {
        self.ratio_to_u64(num, den, false)
    }
}

impl ApproxFloat {
    fn ratio_to_u64(self, num: u128, den: u128, ceil: bool) -> u64 {
        let v = self.mul_ratio(num, den);
        if v.mantissa == 0 {
            return 0;
        }
        if v.exponent >= 64 {
            return u64::MAX;
        }
        if v.exponent < 0 {
            return ceil as u64;
        }
        let frac_bits = 63 - v.exponent as u32;
        let int = v.mantissa >> frac_bits;
        let frac = v.mantissa & ((1u64 << frac_bits) - 1);
        if ceil && frac != 0 {
            int.saturating_add(1)
        } else {
            int
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_small_integers() {
        let a = ApproxFloat::from_u128(6);
        let b = ApproxFloat::from_u128(7);
        assert_eq!(a.mul(b), ApproxFloat::from_u128(42));
        assert_eq!(a + b, ApproxFloat::from_u128(13));
        assert!(a < b);
        assert_eq!(ApproxFloat::from_u128(4).pow(10), ApproxFloat::from_u128(1 << 20));
    }

    #[test]
    fn wide_exponents() {
        let t = ApproxFloat::from_u128(16);
        let big = t.pow(10_000); // 2^40000, far beyond f64
        assert_eq!(big.log2_floor(), 40_000);
        assert!(big > t.pow(9_999));
        assert_eq!(big.div(t.pow(9_999)), t);
    }

    #[test]
    fn ratio_rounding() {
        let x = ApproxFloat::from_u128(7);
        assert_eq!(x.ceil_ratio_u64(2, 4), 4); // ⌈3.5⌉
        assert_eq!(x.floor_ratio_u64(2, 4), 3);
        assert_eq!(x.ceil_ratio_u64(1, 7), 1);
        assert_eq!(ApproxFloat::ZERO.ceil_ratio_u64(5, 3), 0);
    }

    #[test]
    fn zero_behaviour() {
        let z = ApproxFloat::ZERO;
        let x = ApproxFloat::from_u128(9);
        assert_eq!(z + x, x);
        assert!(z.mul(x).is_zero());
        assert!(z < x);
    }
}
