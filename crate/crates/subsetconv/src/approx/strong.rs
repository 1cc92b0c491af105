//! Strongly-polynomial (1+ε) min-sum approximation. Every optimal split is
//! either distant (summand ratio outside [ε/4, 4/ε]) or close; the distant
//! solver covers the first case through a distant covering and min-max
//! convolutions, the close solver the second through ascending-scale
//! rounding, and their pointwise min is unconditionally (1+ε)-bounded.

use rayon::prelude::*;

use crate::error::Result;
use crate::lattice::{bounded_minsum, validate_tropical};
use crate::semiring::TropicalOp;
use crate::setfn::SetFunction;
use crate::value::{ApproxScalar, Epsilon, ExtValue, Finite, Infinity};
use crate::IntSetFunction;

use super::covering::{distant_covering, fold_family_min};
use super::{finite_extremes, q_parts, zero_feasible, ApproxParams, QSchedule};

/// Distant-split solver: h(S) ≤ h̃(S) everywhere, and h̃(S) ≤ (1+ε)h(S)
/// wherever some optimal split has ratio outside [ε/4, 4/ε]. Uses a distant
/// covering at ε/4, whose min-of-max lies in [(1−ε/2)h, h] on distant
/// optima; dividing by (1−ε/2) restores soundness at a ≤ (1+ε) cost.
pub fn distant_conv<T: ApproxScalar + Send + Sync>(
    f: &SetFunction<ExtValue<T>>,
    g: &SetFunction<ExtValue<T>>,
    params: ApproxParams,
) -> Result<SetFunction<ExtValue<T>>> {
    f.same_domain(g)?;
    validate_tropical(TropicalOp::MinSum, f)?;
    validate_tropical(TropicalOp::MinSum, g)?;
    let eps = params.eps;

    let zero = zero_feasible(f, g)?;
    let quarter = Epsilon::new(eps.num, eps.den.checked_mul(4).expect("eps overflow"))?;
    let family = distant_covering(f, g, quarter);
    let folded = fold_family_min(f.n(), &family)?;

    // 1/(1 − ε/2) = 2·den / (2·den − num)
    let snum = 2 * eps.den as u128;
    let sden = snum - eps.num as u128;
    SetFunction::from_fn(f.n(), |s| {
        let scaled = folded[s].map(|x| x.mul_ratio(snum, sden));
        if zero[s] {
            scaled.min(Finite(T::zero()))
        } else {
            scaled
        }
    })
}

/// S ↦ ⌈4f(S)/(εq)⌉ when εq/16 ≤ f(S) ≤ q, else ∞; q = 2^q_exp. Kept values
/// lie in [1, ⌈4/ε⌉].
pub fn scale_close<T: ApproxScalar>(
    f: &SetFunction<ExtValue<T>>,
    q_exp: i32,
    eps: Epsilon,
) -> Result<IntSetFunction> {
    let (qn, qd) = q_parts(q_exp)?;
    Ok(f.map(|v| match v {
        Finite(x) => {
            // εq/16 ≤ x ⇔ x·16·den·qd ≥ num·qn, checked as x·(16den·qd)/(num·qn) ≥ 1;
            // x ≤ q ⇔ x·qd/qn ≤ 1.
            let above = x.mul_ratio(16 * eps.den as u128 * qd, eps.num as u128 * qn)
                >= T::from_u64(1);
            let below = x.mul_ratio(qd, qn) <= T::from_u64(1);
            if above && below {
                Finite(x.ceil_ratio_u64(4 * eps.den as u128 * qd, eps.num as u128 * qn))
            } else {
                Infinity
            }
        }
        _ => Infinity,
    }))
}

/// Close-split solver: h ≤ h̃ everywhere, h̃ ≤ (1+ε)h wherever some optimal
/// split has ratio in [ε/4, 4/ε]. Default sparse-vs-bounded threshold is
/// 2^n·⌈4/ε⌉ pair evaluations, mirroring the min{α_q β_q, 2^n/ε} accounting.
pub fn close_conv<T: ApproxScalar + Send + Sync>(
    f: &SetFunction<ExtValue<T>>,
    g: &SetFunction<ExtValue<T>>,
    params: ApproxParams,
) -> Result<SetFunction<ExtValue<T>>> {
    let threshold = (1u64 << f.n()) * params.eps.four_over_ceil();
    close_conv_with_threshold(f, g, params, threshold)
}

pub fn close_conv_with_threshold<T: ApproxScalar + Send + Sync>(
    f: &SetFunction<ExtValue<T>>,
    g: &SetFunction<ExtValue<T>>,
    params: ApproxParams,
    sparse_threshold: u64,
) -> Result<SetFunction<ExtValue<T>>> {
    f.same_domain(g)?;
    validate_tropical(TropicalOp::MinSum, f)?;
    validate_tropical(TropicalOp::MinSum, g)?;
    let eps = params.eps;
    let n = f.n();

    let zero = zero_feasible(f, g)?;
    let mut result = SetFunction::from_fn(n, |s| {
        if zero[s] {
            Finite(T::zero())
        } else {
            Infinity
        }
    })?;

    let (Some(min_pos), Some(max_fin)) = finite_extremes(f, g) else {
        return Ok(result);
    };
    let cap = eps.four_over_ceil();
    let schedule = QSchedule::ascending(min_pos, max_fin);

    let rounds: Vec<(i32, IntSetFunction)> = schedule
        .exponents
        .par_iter()
        .map(|&j| {
            let sf = scale_close(f, j, eps)?;
            let sg = scale_close(g, j, eps)?;
            let support = |x: &IntSetFunction| -> Vec<(u32, u64)> {
                x.values()
                    .iter()
                    .enumerate()
                    .filter_map(|(m, v)| v.finite().map(|y| (m as u32, y)))
                    .collect()
            };
            let fs = support(&sf);
            let gs = support(&sg);
            let hq = if fs.is_empty() || gs.is_empty() {
                SetFunction::constant(n, Infinity)?
            } else if (fs.len() as u64).saturating_mul(gs.len() as u64) <= sparse_threshold {
                // α_q·β_q pair sweep over the non-∞ supports
                let mut hq = SetFunction::constant(n, Infinity)?;
                for &(ma, va) in &fs {
                    for &(mb, vb) in &gs {
                        if ma & mb == 0 {
                            let slot = &mut hq[ma | mb];
                            *slot = (*slot).min(Finite(va + vb));
                        }
                    }
                }
                hq
            } else {
                bounded_minsum(&sf, &sg, cap)?
            };
            Ok((j, hq))
        })
        .collect::<Result<_>>()?;

    for (j, hq) in rounds {
        let (qn, qd) = q_parts(j)?;
        // εq/4 = (num·qn) / (4·den·qd)
        let num = eps.num as u128 * qn;
        let den = 4 * eps.den as u128 * qd;
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

/// Unconditional strongly-polynomial (1+ε) approximation: pointwise min of
/// the distant and close solvers.
pub fn approx_minsum_strong<T: ApproxScalar + Send + Sync>(
    f: &SetFunction<ExtValue<T>>,
    g: &SetFunction<ExtValue<T>>,
    params: ApproxParams,
) -> Result<SetFunction<ExtValue<T>>> {
    let h1 = distant_conv(f, g, params)?;
    let h2 = close_conv(f, g, params)?;
    SetFunction::from_fn(f.n(), |s| h1[s].min(h2[s]))
}
