//! Value domain shared by all convolutions: nonnegative scalars extended
//! with infinities, plus the scaling hooks the approximation algorithms need.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::Add;

use num::rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Exact rational scalar. Used for all approximate outputs so that the
/// soundness checks (`h ≤ h̃`) carry no floating-point slack.
pub type Rat = Ratio<i128>;

/// Relative-error parameter, parsed exactly from a decimal or `p/q` string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Epsilon {
    pub num: u64,
    pub den: u64,
}

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::domain("epsilon must be positive"));
        }
        let g = gcd(num, den);
        Ok(Epsilon { num: num / g, den: den / g })
    }

    /// Parses `"0.1"`, `".25"` or `"1/10"` without going through f64.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::domain(format!("cannot parse epsilon {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let num: u64 = p.trim().parse().map_err(|_| bad())?;
            let den: u64 = q.trim().parse().map_err(|_| bad())?;
            return Epsilon::new(num, den);
        }
        if let Some((int, frac)) = s.split_once('.') {
            let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let den = 10u64.pow(frac.len() as u32);
            let frac: u64 = frac.parse().map_err(|_| bad())?;
            return Epsilon::new(int * den + frac, den);
        }
        let num: u64 = s.trim().parse().map_err(|_| bad())?;
        Epsilon::new(num, 1)
    }

    pub fn is_less_than_one(&self) -> bool {
        self.num < self.den
    }

    /// ⌈4/ε⌉, the value cap used by all scaling rounds.
    pub fn four_over_ceil(&self) -> u64 {
        (4 * self.den).div_ceil(self.num)
    }

    pub fn as_rat(&self) -> Rat {
        Rat::new(self.num as i128, self.den as i128)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A scalar usable as a tropical value: totally ordered, addable, with a zero.
pub trait Scalar: Copy + Ord + Debug + Zero + Add<Output = Self> {}
impl<T: Copy + Ord + Debug + Zero + Add<Output = T>> Scalar for T {}

/// Scalar flavors accepted by the approximation algorithms. Implemented by
/// [`Rat`] (exact end-to-end) and by the wide-exponent float of the
/// equivalence reduction (rounded, with documented ulp slack).
pub trait ApproxScalar: Scalar {
    fn from_u64(v: u64) -> Self;
    /// 2^e, with e possibly negative.
    fn two_pow(e: i32) -> Self;
    /// ⌊log2(self)⌋ for self > 0.
    fn log2_floor(self) -> i32;
    /// self · num/den.
    fn mul_ratio(self, num: u128, den: u128) -> Self;
    /// ⌈self · num/den⌉ as u64, saturating at `u64::MAX` (self ≥ 0).
    fn ceil_ratio_u64(self, num: u128, den: u128) -> u64;
    /// ⌊self · num/den⌋ as u64, saturating at `u64::MAX` (self ≥ 0).
    fn floor_ratio_u64(self, num: u128, den: u128) -> u64;
}

/// ⌊log2(a/b)⌋ for positive a, b.
pub(crate) fn log2_floor_u128(a: u128, b: u128) -> i32 {
    debug_assert!(a > 0 && b > 0);
    // b·2^e ≤ a?
    let le_pow = |e: i32| -> bool {
        if e >= 0 {
            if e >= 128 || b.leading_zeros() < e as u32 {
                return false; // b·2^e overflows 128 bits, certainly > a
            }
            (b << e) <= a
        } else {
            let s = (-e) as u32;
            if s >= 128 || a.leading_zeros() < s {
                return true; // a·2^s overflows, certainly ≥ b
            }
            b <= (a << s)
        }
    };
    let mut e = (127 - a.leading_zeros()) as i32 - (127 - b.leading_zeros()) as i32;
    while !le_pow(e) {
        e -= 1;
    }
    while le_pow(e + 1) {
        e += 1;
    }
    e
}

impl ApproxScalar for Rat {
    fn from_u64(v: u64) -> Self {
        Rat::from_integer(v as i128)
    }

    fn two_pow(e: i32) -> Self {
        if e >= 0 {
            Rat::from_integer(1i128 << e)
        } else {
            Rat::new(1, 1i128 << (-e))
        }
    }

    fn log2_floor(self) -> i32 {
        assert!(self > Rat::zero());
        log2_floor_u128(*self.numer() as u128, *self.denom() as u128)
    }

    fn mul_ratio(self, num: u128, den: u128) -> Self {
        let num = i128::try_from(num).expect("ratio numerator out of range");
        let den = i128::try_from(den).expect("ratio denominator out of range");
        self * Rat::new(num, den)
    }

    fn ceil_ratio_u64(self, num: u128, den: u128) -> u64 {
        rat_ratio_to_u64(self, num, den, true)
    }

    fn floor_ratio_u64(self, num: u128, den: u128) -> u64 {
        rat_ratio_to_u64(self, num, den, false)
    }
}

fn rat_ratio_to_u64(x: Rat, num: u128, den: u128, ceil: bool) -> u64 {
    debug_assert!(x >= Rat::zero());
    let a = (*x.numer() as u128).checked_mul(num);
    let b = (*x.denom() as u128).checked_mul(den);
    match (a, b) {
        (Some(a), Some(b)) => {
            let q = if ceil { a.div_ceil(b) } else { a / b };
            u64::try_from(q).unwrap_or(u64::MAX)
        }
        // Overflowing products only arise for values far beyond any scaling
        // cap; saturating maps them to the ∞ branch of the caller.
        _ => u64::MAX,
    }
}

/// Converts an f64 to the exact rational it represents.
pub fn rat_from_f64(x: f64) -> Result<Rat> {
    if !x.is_finite() {
        return Err(Error::domain("non-finite float"));
    }
    let (mant, exp, sign) = {
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i128 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        if exp == 0 {
            (frac, -1074i64, sign)
        } else {
            (frac | (1 << 52), exp - 1075, sign)
        }
    };
    if mant == 0 {
        return Ok(Rat::zero());
    }
    // Strip trailing zeros so the denominator shift stays in i128 range.
    let tz = mant.trailing_zeros().min((-exp).max(0) as u32);
    let mant = mant >> tz;
    let exp = exp + tz as i64;
    let m = sign * mant as i128;
    if exp >= 0 {
        if exp > 70 {
            return Err(Error::domain("float magnitude out of range"));
        }
        Ok(Rat::from_integer(m << exp))
    } else {
        if -exp > 120 {
            return Err(Error::domain("float magnitude out of range"));
        }
        Ok(Rat::new(m, 1i128 << -exp))
    }
}

pub fn rat_to_f64(x: Rat) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// A nonnegative scalar extended with ±∞. `Infinity` is the infeasibility
/// sentinel of min-sum and min-max; `NegInfinity` plays the same role for
/// max-sum. Infinities never enter ring arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtValue<T> {
    NegInfinity,
    Finite(T),
    Infinity,
}

pub use ExtValue::{Finite, Infinity, NegInfinity};

impl<T: Ord> PartialOrd for ExtValue<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Ord> Ord for ExtValue<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtValue::*;
        match (self, other) {
            (NegInfinity, NegInfinity) | (Infinity, Infinity) => Ordering::Equal,
            (NegInfinity, _) | (_, Infinity) => Ordering::Less,
            (_, NegInfinity) | (Infinity, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl<T> ExtValue<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn finite(self) -> Option<T> {
        match self {
            Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_ref(&self) -> ExtValue<&T> {
        match self {
            Finite(v) => Finite(v),
            Infinity => Infinity,
            NegInfinity => NegInfinity,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> ExtValue<U> {
        match self {
            Finite(v) => Finite(f(v)),
            Infinity => Infinity,
            NegInfinity => NegInfinity,
        }
    }
}

impl<T: Scalar> ExtValue<T> {
    /// Tropical sum: +∞ absorbs, then −∞. Mixed-sign infinities never meet in
    /// validated inputs (min-sum functions carry no −∞, max-sum no +∞).
    pub fn sat_add(self, other: Self) -> Self {
        use ExtValue::*;
        match (self, other) {
            (Infinity, _) | (_, Infinity) => Infinity,
            (NegInfinity, _) | (_, NegInfinity) => NegInfinity,
            (Finite(a), Finite(b)) => Finite(a + b),
        }
    }
}
