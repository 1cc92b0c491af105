//! (1±ε)-approximate tropical subset convolutions: the weakly-polynomial
//! scaling algorithm, covering-family constructions, the strongly-polynomial
//! combination of the distant and close solvers, and the max-sum adapter.

mod covering;
mod scaling;
mod strong;

pub use covering::{
    approx_minsum_simple, covering_minsum, distant_covering, minmax_ranked, sum_to_max_covering,
    CoveringFamily, CoveringKind,
};
pub use scaling::{approx_maxsum, approx_minsum_weak, scale_maxsum, scale_weak};
pub use strong::{approx_minsum_strong, close_conv, close_conv_with_threshold, distant_conv, scale_close};

use crate::error::{Error, Result};
use crate::minmax::boolean_subset_convolution;
use crate::setfn::SetFunction;
use crate::value::{ApproxScalar, Epsilon, ExtValue, Finite};

/// Parameters shared by every approximator. The guarantees are multiplicative
/// (1±ε) bounds, so ε must lie strictly inside (0, 1).
#[derive(Debug, Clone, Copy)]
pub struct ApproxParams {
    pub eps: Epsilon,
}

impl ApproxParams {
    pub fn new(eps: Epsilon) -> Result<Self> {
        if !eps.is_less_than_one() {
            return Err(Error::domain("epsilon must lie in (0, 1)"));
        }
        Ok(ApproxParams { eps })
    }
}

/// q = 2^j scales swept by the scaling algorithms, as exponents. The range
/// covers every exponent whose scale can certify a positive finite optimum:
/// optima lie in [smallest positive input, 2·(largest finite input)].
#[derive(Debug, Clone)]
pub struct QSchedule {
    pub exponents: Vec<i32>,
}

impl QSchedule {
    pub fn descending<T: ApproxScalar>(min_pos: T, max_finite: T) -> Self {
        let mut s = Self::ascending(min_pos, max_finite);
        s.exponents.reverse();
        s
    }

    pub fn ascending<T: ApproxScalar>(min_pos: T, max_finite: T) -> Self {
        let lo = min_pos.log2_floor();
        let hi = ceil_log2(max_finite) + 1; // 2^hi ≥ 2·max ≥ any optimum
        QSchedule { exponents: (lo..=hi).collect() }
    }
}

pub(crate) fn ceil_log2<T: ApproxScalar>(x: T) -> i32 {
    let e = x.log2_floor();
    if T::two_pow(e) == x {
        e
    } else {
        e + 1
    }
}

/// 2^j as a (numerator, denominator) pair for the ratio helpers.
pub(crate) fn q_parts(j: i32) -> Result<(u128, u128)> {
    if !(-64..=64).contains(&j) {
        return Err(Error::overflow(format!("scale exponent {j} out of range")));
    }
    Ok(if j >= 0 { (1 << j, 1) } else { (1, 1 << -j) })
}

/// Smallest positive and largest finite value across both inputs.
pub(crate) fn finite_extremes<T: ApproxScalar>(
    f: &SetFunction<ExtValue<T>>,
    g: &SetFunction<ExtValue<T>>,
) -> (Option<T>, Option<T>) {
    let mut min_pos: Option<T> = None;
    let mut max_fin: Option<T> = None;
    for v in f.values().iter().chain(g.values()) {
        if let Finite(x) = v {
            if *x > T::zero() && min_pos.is_none_or(|m| *x < m) {
                min_pos = Some(*x);
            }
            if max_fin.is_none_or(|m| *x > m) {
                max_fin = Some(*x);
            }
        }
    }
    (min_pos, max_fin)
}

/// Marks every S admitting a split with both summands exactly zero. The
/// scaling analysis has no q ≤ 0, and (1+ε)·0 = 0 leaves no room for error,
/// so zero optima are pinned exactly by this boolean convolution.
pub(crate) fn zero_feasible<T: ApproxScalar>(
    f: &SetFunction<ExtValue<T>>,
    g: &SetFunction<ExtValue<T>>,
) -> Result<SetFunction<bool>> {
    let ind = |x: &SetFunction<ExtValue<T>>| x.map(|v| *v == Finite(T::zero()));
    boolean_subset_convolution(&ind(f), &ind(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::Rat;

    #[test]
    fn params_reject_eps_at_least_one() {
        assert!(ApproxParams::new(Epsilon::parse("1").unwrap()).is_err());
        assert!(ApproxParams::new(Epsilon::parse("0.5").unwrap()).is_ok());
    }

    #[test]
    fn schedule_spans_value_range() {
        let s = QSchedule::ascending(Rat::from_integer(1), Rat::from_integer(12));
        // q from 1 up to 2^⌈log2 24⌉ = 32
        assert_eq!(s.exponents, vec![0, 1, 2, 3, 4, 5]);
        let d = QSchedule::descending(Rat::from_integer(1), Rat::from_integer(12));
        assert_eq!(d.exponents, vec![5, 4, 3, 2, 1, 0]);
    }
}
