//! Subset-lattice transforms and the convolutions built on them: the naive
//! O(3^n) oracle, the ranked O(2^n n²) sum-product convolution, and the
//! polynomial-encoded bounded min-sum / max-sum convolutions.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modular::Ring;
use crate::poly::SparsePoly;
use crate::semiring::{valid_input, TropicalOp};
use crate::setfn::{submasks, SetFunction};
use crate::value::{ExtValue, Finite, Infinity, NegInfinity, Scalar};
use crate::IntSetFunction;

/// Largest value bound accepted by the bounded tropical convolutions; keeps
/// the dense multiplication scratch within a few megabytes.
pub const MAX_VALUE_BOUND: u64 = 1 << 20;

/// In-place zeta transform: values[S] ← Σ_{T ⊆ S} values[T]. Length must be a
/// power of two.
pub fn zeta_in_place<R: Ring + Send>(values: &mut [R]) {
    dimension_sweep(values, |acc, low| acc.add(low));
}

/// In-place Möbius transform, the exact inverse of [`zeta_in_place`].
pub fn moebius_in_place<R: Ring + Send>(values: &mut [R]) {
    dimension_sweep(values, |acc, low| acc.sub(low));
}

fn dimension_sweep<R: Ring + Send>(values: &mut [R], step: impl Fn(&R, &R) -> R + Sync) {
    let len = values.len();
    assert!(len.is_power_of_two());
    let mut bit = 1;
    while bit < len {
        values.par_chunks_mut(2 * bit).for_each(|chunk| {
            let (lo, hi) = chunk.split_at_mut(bit);
            for (h, l) in hi.iter_mut().zip(lo.iter()) {
                *h = step(h, l);
            }
        });
        bit <<= 1;
    }
}

/// Direct-definition tropical convolution; the ground-truth oracle for every
/// other convolution in the crate. O(3^n).
pub fn naive_tropical<T: Scalar>(
    op: TropicalOp,
    f: &SetFunction<ExtValue<T>>,
    g: &SetFunction<ExtValue<T>>,
) -> Result<SetFunction<ExtValue<T>>> {
    f.same_domain(g)?;
    validate_tropical(op, f)?;
    validate_tropical(op, g)?;
    SetFunction::from_fn(f.n(), |s| {
        let mut acc = op.plus_identity();
        for t in submasks(s) {
            acc = op.plus(acc, op.times(f[t], g[s ^ t]));
        }
        acc
    })
}

pub fn validate_tropical<T: Scalar>(op: TropicalOp, f: &SetFunction<ExtValue<T>>) -> Result<()> {
    for (mask, v) in f.values().iter().enumerate() {
        if !valid_input(op, v) {
            return Err(Error::domain(format!(
                "entry at mask {mask} is not a valid {op:?} input (negative or wrong infinity)"
            )));
        }
    }
    Ok(())
}

/// Direct-definition sum-product convolution over a ring; oracle for
/// [`fast_sumproduct`]. O(3^n) ring operations.
pub fn naive_sumproduct<R: Ring>(f: &SetFunction<R>, g: &SetFunction<R>) -> Result<SetFunction<R>> {
    f.same_domain(g)?;
    SetFunction::from_fn(f.n(), |s| {
        let mut acc = R::zero();
        for t in submasks(s) {
            acc = acc.add(&f[t].mul(&g[s ^ t]));
        }
        acc
    })
}

/// Ranked sum-product subset convolution: split by subset cardinality, zeta
/// each rank slice, multiply the rank polynomials pointwise, invert. Exactly
/// equals [`naive_sumproduct`] in O(2^n n²) ring operations.
pub fn fast_sumproduct<R: Ring + Send + Sync>(
    f: &SetFunction<R>,
    g: &SetFunction<R>,
) -> Result<SetFunction<R>> {
    f.same_domain(g)?;
    let n = f.n() as usize;
    let len = f.len();

    let ranked = |fun: &SetFunction<R>| -> Vec<Vec<R>> {
        let mut slices = vec![vec![R::zero(); len]; n + 1];
        for mask in 0..len {
            slices[mask.count_ones() as usize][mask] = fun.values()[mask].clone();
        }
        slices.par_iter_mut().for_each(|s| zeta_in_place(s));
        slices
    };
    let fr = ranked(f);
    let gr = ranked(g);

    let mut hr: Vec<Vec<R>> = (0..=n)
        .map(|k| {
            (0..len)
                .into_par_iter()
                .map(|mask| {
                    let mut acc = R::zero();
                    for j in 0..=k {
                        acc = acc.add(&fr[j][mask].mul(&gr[k - j][mask]));
                    }
                    acc
                })
                .collect()
        })
        .collect();
    hr.par_iter_mut().for_each(|s| moebius_in_place(s));

    SetFunction::from_fn(f.n(), |mask| {
        std::mem::replace(&mut hr[mask.count_ones() as usize][mask as usize], R::zero())
    })
}

/// Exact min-sum convolution for inputs whose finite values lie in [0, bound]:
/// encode v as the monomial x^v (∞ as the zero polynomial), convolve over the
/// polynomial ring, read the least degree with a surviving coefficient.
pub fn bounded_minsum(f: &IntSetFunction, g: &IntSetFunction, bound: u64) -> Result<IntSetFunction> {
    let h = bounded_polynomial_conv(TropicalOp::MinSum, f, g, bound)?;
    Ok(h.map(|p| match p.least_degree() {
        Some(d) => Finite(d as u64),
        None => Infinity,
    }))
}

/// Max-sum counterpart of [`bounded_minsum`]: −∞ encodes as the zero
/// polynomial and the greatest surviving degree is read instead.
pub fn bounded_maxsum(f: &IntSetFunction, g: &IntSetFunction, bound: u64) -> Result<IntSetFunction> {
    let h = bounded_polynomial_conv(TropicalOp::MaxSum, f, g, bound)?;
    Ok(h.map(|p| match p.greatest_degree() {
        Some(d) => Finite(d as u64),
        None => NegInfinity,
    }))
}

fn bounded_polynomial_conv(
    op: TropicalOp,
    f: &IntSetFunction,
    g: &IntSetFunction,
    bound: u64,
) -> Result<SetFunction<SparsePoly>> {
    f.same_domain(g)?;
    if bound > MAX_VALUE_BOUND {
        return Err(Error::overflow(format!(
            "value bound {bound} exceeds the supported maximum {MAX_VALUE_BOUND}"
        )));
    }
    let encode = |fun: &IntSetFunction| -> Result<SetFunction<SparsePoly>> {
        validate_tropical(op, fun)?;
        for (mask, v) in fun.values().iter().enumerate() {
            if let Finite(x) = v {
                if *x > bound {
                    return Err(Error::domain(format!(
                        "finite value {x} at mask {mask} exceeds the bound {bound}"
                    )));
                }
            }
        }
        Ok(fun.map(|v| match v {
            Finite(x) => SparsePoly::monomial(*x as u32),
            _ => SparsePoly::zero(),
        }))
    };
    fast_sumproduct(&encode(f)?, &encode(g)?)
}
