//! Exact min-max subset convolution in Õ(2^{3n/2}) time: sort all input
//! values, sweep them in chunks, detect with a boolean subset convolution the
//! first chunk at which each output set becomes feasible, then resolve that
//! set by a local scan of the chunk's entries.

use rayon::prelude::*;

use crate::error::Result;
use crate::lattice::{fast_sumproduct, validate_tropical};
use crate::modular::Mod61;
use crate::semiring::TropicalOp;
use crate::setfn::SetFunction;
use crate::value::{ExtValue, Finite, Infinity, Scalar};

/// Which input table a sorted entry came from. Part of the deterministic
/// sort key (value, origin, mask).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Origin {
    F,
    G,
}

/// The sorted value list and its division into chunks.
pub struct ChunkPlan<T> {
    /// All 2·2^n entries of both inputs, ascending by (value, origin, mask);
    /// ∞ entries sort last and never enter an indicator.
    pub entries: Vec<(ExtValue<T>, Origin, u32)>,
    pub chunk_size: usize,
}

impl<T: Scalar> ChunkPlan<T> {
    pub fn build(
        f: &SetFunction<ExtValue<T>>,
        g: &SetFunction<ExtValue<T>>,
        chunk_size: usize,
    ) -> Self {
        assert!(chunk_size > 0);
        let mut entries = Vec::with_capacity(2 * f.len());
        for (mask, v) in f.values().iter().enumerate() {
            entries.push((*v, Origin::F, mask as u32));
        }
        for (mask, v) in g.values().iter().enumerate() {
            entries.push((*v, Origin::G, mask as u32));
        }
        entries.sort_unstable_by(|a, b| a.cmp(b));
        ChunkPlan { entries, chunk_size }
    }

    pub fn chunk_count(&self) -> usize {
        self.entries.len().div_ceil(self.chunk_size)
    }

    /// Index range of chunk `i` within `entries`.
    pub fn chunk_range(&self, i: usize) -> std::ops::Range<usize> {
        let start = i * self.chunk_size;
        start..((start + self.chunk_size).min(self.entries.len()))
    }
}

/// ⌈√(2^{n+1})⌉, the chunk size balancing boolean convolutions against scans.
pub fn default_chunk_size(n: u32) -> usize {
    let total = 2u64 << n;
    let mut r = (total as f64).sqrt() as u64;
    while r * r < total {
        r += 1;
    }
    while r > 1 && (r - 1) * (r - 1) >= total {
        r -= 1;
    }
    r as usize
}

/// h(S) = 1 iff some split S = T ⊎ (S∖T) has a(T) = b(S∖T) = 1. Runs the
/// ranked convolution over the 2^61−1 field; pair counts stay below the
/// prime, so the nonzero test is exact.
pub fn boolean_subset_convolution(
    a: &SetFunction<bool>,
    b: &SetFunction<bool>,
) -> Result<SetFunction<bool>> {
    let enc = |x: &SetFunction<bool>| x.map(|&v| Mod61::new(v as u64));
    let h = fast_sumproduct(&enc(a), &enc(b))?;
    Ok(h.map(|c| c.value() != 0))
}

/// Instrumentation from one min-max convolution run.
#[derive(Debug, Clone)]
pub struct MinMaxStats {
    /// How many chunks finalized each S; exactness requires ≤ 1.
    pub resolve_counts: Vec<u32>,
    /// Candidate-pair evaluations spent resolving each S.
    pub comparisons: Vec<u64>,
    pub chunk_size: usize,
    pub chunks_swept: usize,
}

/// h(S) = min_{T ⊆ S} max{f(T), g(S∖T)}, exactly, with the default chunk size.
pub fn minmax_convolution<T: Scalar + Send + Sync>(
    f: &SetFunction<ExtValue<T>>,
    g: &SetFunction<ExtValue<T>>,
) -> Result<SetFunction<ExtValue<T>>> {
    Ok(minmax_with_chunk_size(f, g, default_chunk_size(f.n()))?.0)
}

pub fn minmax_with_chunk_size<T: Scalar + Send + Sync>(
    f: &SetFunction<ExtValue<T>>,
    g: &SetFunction<ExtValue<T>>,
    chunk_size: usize,
) -> Result<(SetFunction<ExtValue<T>>, MinMaxStats)> {
    f.same_domain(g)?;
    validate_tropical(TropicalOp::MinMax, f)?;
    validate_tropical(TropicalOp::MinMax, g)?;
    let n = f.n();
    let plan = ChunkPlan::build(f, g, chunk_size);
    let len = f.len();
    let mut result: Vec<ExtValue<T>> = vec![Infinity; len];
    let mut resolved = vec![false; len];
    let mut resolve_counts = vec![0u32; len];
    let mut comparisons = vec![0u64; len];
    let mut chunks_swept = 0;

    for i in 0..plan.chunk_count() {
        let range = plan.chunk_range(i);
        // Threshold = largest finite value in the chunk; a chunk of pure ∞
        // entries ends the sweep (∞ never certifies feasibility).
        let Some(tv) = plan.entries[range.clone()]
            .iter()
            .rev()
            .find_map(|(v, _, _)| v.finite())
        else {
            break;
        };
        chunks_swept += 1;

        let ind = |fun: &SetFunction<ExtValue<T>>| fun.map(|v| *v <= Finite(tv));
        let hhat = boolean_subset_convolution(&ind(f), &ind(g))?;

        // Entries tied with the threshold may spill past the chunk boundary;
        // the resolving witness can sit anywhere in the tie run.
        let mut scan_end = range.end;
        while scan_end < plan.entries.len() && plan.entries[scan_end].0 <= Finite(tv) {
            scan_end += 1;
        }
        let scan = &plan.entries[range.start..scan_end];

        result
            .par_iter_mut()
            .zip(resolved.par_iter_mut())
            .zip(resolve_counts.par_iter_mut())
            .zip(comparisons.par_iter_mut())
            .enumerate()
            .for_each(|(s, (((res, done), count), comps))| {
                if *done || !hhat.values()[s] {
                    return;
                }
                *done = true;
                *count += 1;
                let s = s as u32;
                let mut best: ExtValue<T> = Infinity;
                for &(v, origin, u) in scan {
                    if u & !s != 0 {
                        continue;
                    }
                    *comps += 1;
                    let other = match origin {
                        Origin::F => g.values()[(s ^ u) as usize],
                        Origin::G => f.values()[(s ^ u) as usize],
                    };
                    best = best.min(v.max(other));
                }
                *res = best;
            });

        if resolved.iter().all(|&r| r) {
            break;
        }
    }

    let stats = MinMaxStats { resolve_counts, comparisons, chunk_size, chunks_swept };
    Ok((SetFunction::new(n, result)?, stats))
}
