//! Weakly-polynomial scaling approximation: round both inputs at a geometric
//! ladder of scales q, solve the bounded exact convolution at each scale, and
//! keep the best rescaled answer. Ceilings give h̃ ≥ h; the scale q ≈ h round
//! gives h̃ ≤ (1+ε)h. The max-sum variant uses floors and reads the greatest
//! degree, flipping both bounds.

use rayon::prelude::*;

use crate::error::Result;
use crate::lattice::{bounded_maxsum, bounded_minsum, validate_tropical};
use crate::semiring::TropicalOp;
use crate::setfn::SetFunction;
use crate::value::{ApproxScalar, Epsilon, ExtValue, Finite, Infinity, NegInfinity};
use crate::IntSetFunction;

use super::{finite_extremes, q_parts, zero_feasible, ApproxParams, QSchedule};

/// S ↦ ⌈2f(S)/(εq)⌉ when that is ≤ ⌈4/ε⌉, else ∞; q = 2^q_exp.
pub fn scale_weak<T: ApproxScalar>(
    f: &SetFunction<ExtValue<T>>,
    q_exp: i32,
    eps: Epsilon,
) -> Result<IntSetFunction> {
    let (qn, qd) = q_parts(q_exp)?;
    let cap = eps.four_over_ceil();
    // 2/(εq) = (2·den·qd) / (num·qn)
    let num = 2 * eps.den as u128 * qd;
    let den = eps.num as u128 * qn;
    Ok(f.map(|v| match v {
        Finite(x) => {
            let s = x.ceil_ratio_u64(num, den);
            if s <= cap {
                Finite(s)
            } else {
                Infinity
            }
        }
        _ => Infinity,
    }))
}

/// Floor twin of [`scale_weak`] for max-sum: out-of-cap values become −∞
/// (dropping a candidate can only lower a max, which stays sound).
pub fn scale_maxsum<T: ApproxScalar>(
    f: &SetFunction<ExtValue<T>>,
    q_exp: i32,
    eps: Epsilon,
) -> Result<IntSetFunction> {
    let (qn, qd) = q_parts(q_exp)?;
    let cap = eps.four_over_ceil();
    let num = 2 * eps.den as u128 * qd;
    let den = eps.num as u128 * qn;
    Ok(f.map(|v| match v {
        Finite(x) => {
            let s = x.floor_ratio_u64(num, den);
            if s <= cap {
                Finite(s)
            } else {
                NegInfinity
            }
        }
        _ => NegInfinity,
    }))
}

/// h(S) ≤ h̃(S) ≤ (1+ε)·h(S) for h the exact min-sum convolution, in
/// Õ(2^n · log(value range) / ε) time.
pub fn approx_minsum_weak<T: ApproxScalar + Send + Sync>(
    f: &SetFunction<ExtValue<T>>,
    g: &SetFunction<ExtValue<T>>,
    params: ApproxParams,
) -> Result<SetFunction<ExtValue<T>>> {
    f.same_domain(g)?;
    validate_tropical(TropicalOp::MinSum, f)?;
    validate_tropical(TropicalOp::MinSum, g)?;
    let eps = params.eps;

    let zero = zero_feasible(f, g)?;
    let mut result = SetFunction::from_fn(f.n(), |s| {
        if zero[s] {
            Finite(T::zero())
        } else {
            Infinity
        }
    })?;

    let (Some(min_pos), Some(max_fin)) = finite_extremes(f, g) else {
        // Only zeros and ∞ remain: every feasible optimum is 0, already set.
        return Ok(result);
    };
    let cap = eps.four_over_ceil();
    let schedule = QSchedule::descending(min_pos, max_fin);

    let rounds: Vec<(i32, IntSetFunction)> = schedule
        .exponents
        .par_iter()
        .map(|&j| {
            let sf = scale_weak(f, j, eps)?;
            let sg = scale_weak(g, j, eps)?;
            Ok((j, bounded_minsum(&sf, &sg, cap)?))
        })
        .collect::<Result<_>>()?;

    for (j, hq) in rounds {
        let (qn, qd) = q_parts(j)?;
        // εq/2 = (num·qn) / (2·den·qd)
        let num = eps.num as u128 * qn;
        let den = 2 * eps.den as u128 * qd;
        for (s, v) in hq.values().iter().enumerate() {
            if let Finite(x) = v {
                let cand = Finite(T::from_u64(*x).mul_ratio(num, den));
                let slot = &mut result.values_mut()[s];
                *slot = (*slot).min(cand);
            }
        }
    }
    Ok(result)
}

/// (1−ε)·h(S) ≤ h̃(S) ≤ h(S) for h the exact max-sum convolution.
pub fn approx_maxsum<T: ApproxScalar + Send + Sync>(
    f: &SetFunction<ExtValue<T>>,
    g: &SetFunction<ExtValue<T>>,
    params: ApproxParams,
) -> Result<SetFunction<ExtValue<T>>> {
    f.same_domain(g)?;
    validate_tropical(TropicalOp::MaxSum, f)?;
    validate_tropical(TropicalOp::MaxSum, g)?;
    let eps = params.eps;

    let zero = zero_feasible(f, g)?;
    let mut result = SetFunction::from_fn(f.n(), |s| {
        if zero[s] {
            Finite(T::zero())
        } else {
            NegInfinity
        }
    })?;

    let (Some(min_pos), Some(max_fin)) = finite_extremes(f, g) else {
        return Ok(result);
    };
    let cap = eps.four_over_ceil();
    let schedule = QSchedule::descending(min_pos, max_fin);

    let rounds: Vec<(i32, IntSetFunction)> = schedule
        .exponents
        .par_iter()
        .map(|&j| {
            let sf = scale_maxsum(f, j, eps)?;
            let sg = scale_maxsum(g, j, eps)?;
            Ok((j, bounded_maxsum(&sf, &sg, cap)?))
        })
        .collect::<Result<_>>()?;

    for (j, hq) in rounds {
        let (qn, qd) = q_parts(j)?;
        let num = eps.num as u128 * qn;
        let den = 2 * eps.den as u128 * qd;
        for (s, v) in hq.values().iter().enumerate() {
            if let Finite(x) = v {
                let cand = Finite(T::from_u64(*x).mul_ratio(num, den));
                let slot = &mut result.values_mut()[s];
                *slot = (*slot).max(cand);
            }
        }
    }
    Ok(result)
}
