//! Maximum colorful subtree of a vertex-colored DAG: a rooted subtree whose
//! vertices all carry distinct colors, maximizing total edge weight.
//! The table W(v, S) = best score of a colorful subtree rooted at v using
//! exactly the colors S ∋ c(v) is filled layer by layer over |S|; merging two
//! child forests at v is a max-sum subset convolution over the colors ≠ c(v).

use crate::error::{Error, Result};
use crate::lattice::naive_tropical;
use crate::semiring::TropicalOp;
use crate::setfn::SetFunction;
use crate::value::{Epsilon, ExtValue, Finite, NegInfinity, Rat};

pub const MAX_SUBTREE_COLORS: u32 = 20;

#[derive(Debug, Clone)]
pub struct ColoredDag {
    n: usize,
    k: u32,
    /// color[v] ∈ [k]
    colors: Vec<u32>,
    /// out_edges[v] = (child, weight), weights nonnegative
    out_edges: Vec<Vec<(usize, Rat)>>,
}

impl ColoredDag {
    pub fn new(colors: Vec<u32>, edges: &[(usize, usize, Rat)], k: u32) -> Result<Self> {
        if k > MAX_SUBTREE_COLORS {
            return Err(Error::OrderTooLarge(k, MAX_SUBTREE_COLORS));
        }
        let n = colors.len();
        if let Some(&c) = colors.iter().find(|&&c| c >= k) {
            return Err(Error::domain(format!("color {c} out of range (k = {k})")));
        }
        let mut out_edges = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(u, v, ref w) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::domain(format!("bad edge ({u}, {v})")));
            }
            if *w < Rat::from_integer(0) {
                return Err(Error::domain("edge weights must be nonnegative"));
            }
            out_edges[u].push((v, w.clone()));
            indeg[v] += 1;
        }
        // Kahn's algorithm: everything must be reachable from degree-zero peels
        let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for &(u, _) in &out_edges[v] {
                indeg[u] -= 1;
                if indeg[u] == 0 {
                    queue.push(u);
                }
            }
        }
        if seen != n {
            return Err(Error::domain("graph contains a cycle"));
        }
        Ok(ColoredDag { n, k, colors, out_edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn out_edges(&self) -> &[Vec<(usize, Rat)>] {
        &self.out_edges
    }
}

type Conv<'a> = dyn Fn(
        &SetFunction<ExtValue<Rat>>,
        &SetFunction<ExtValue<Rat>>,
    ) -> Result<SetFunction<ExtValue<Rat>>>
    + 'a;

/// W(v, S) sweep. Layer m = |S|:
///   attach: W(v, S) ← W(u, S ∖ {c(v)}) + w(v, u) over edges v→u with
///           c(u) ∈ S ∖ {c(v)};
///   merge:  W(v, S) ← max over S₁ ∪ S₂ = S, S₁ ∩ S₂ = {c(v)} of
///           W(v, S₁) + W(v, S₂), via (f ⋆ f)(S ∖ {c(v)}) with
///           f(X) = W(v, X ∪ {c(v)}), f cut to |X| ≤ m − 2 so both halves
///           are from earlier layers (one-sided splits add nothing new).
fn subtree_sweep(dag: &ColoredDag, conv: &Conv) -> Result<ExtValue<Rat>> {
    let k = dag.k;
    let size = 1usize << k;
    let mut w: Vec<Vec<ExtValue<Rat>>> = vec![vec![NegInfinity; size]; dag.n];
    for v in 0..dag.n {
        w[v][1 << dag.colors[v]] = Finite(Rat::from_integer(0));
    }
    let mut best = if dag.n == 0 {
        NegInfinity
    } else {
        Finite(Rat::from_integer(0))
    };
    for m in 2..=k {
        for v in 0..dag.n {
            let cv = 1u32 << dag.colors[v];
            for s in 0..size as u32 {
                if s & cv == 0 || s.count_ones() != m {
                    continue;
                }
                let rest = s ^ cv;
                for &(u, ref weight) in &dag.out_edges[v] {
                    if rest & (1 << dag.colors[u]) == 0 {
                        continue;
                    }
                    if let Finite(x) = &w[u][rest as usize] {
                        let cand = Finite(x.clone() + weight.clone());
                        if cand > w[v][s as usize] {
                            w[v][s as usize] = cand;
                        }
                    }
                }
            }
            if m >= 3 {
                let f = SetFunction::from_fn(k, |x| {
                    if x & cv != 0 || x.count_ones() > m - 2 {
                        NegInfinity
                    } else {
                        w[v][(x | cv) as usize].clone()
                    }
                })?;
                let merged = conv(&f, &f)?;
                for s in 0..size as u32 {
                    if s & cv == 0 || s.count_ones() != m {
                        continue;
                    }
                    let cand = &merged[s ^ cv];
                    if *cand > w[v][s as usize] {
                        w[v][s as usize] = cand.clone();
                    }
                }
            }
        }
        for row in &w {
            for s in 0..size as u32 {
                if s.count_ones() == m && row[s as usize] > best {
                    best = row[s as usize].clone();
                }
            }
        }
    }
    Ok(best)
}

/// Exact maximum colorful subtree score (0 for a single vertex, −∞ on an
/// empty graph). Runs the layered sweep with the cubic-time convolution.
pub fn max_colorful_subtree_exact(dag: &ColoredDag) -> Result<ExtValue<Rat>> {
    subtree_sweep(dag, &|f, g| naive_tropical(TropicalOp::MaxSum, f, g))
}

/// (1 ± ε)-approximate maximum colorful subtree score. The sweep issues at
/// most k·|V| convolutions, so each runs at δ = ε / (k·|V|): the compounded
/// lower bound is (1 − δ)^{k|V|} ≥ 1 − ε, and every approximation is
/// one-sided below the true value.
pub fn max_colorful_subtree<F>(dag: &ColoredDag, eps: Epsilon, solver: F) -> Result<ExtValue<Rat>>
where
    F: Fn(
        &SetFunction<ExtValue<Rat>>,
        &SetFunction<ExtValue<Rat>>,
        Epsilon,
    ) -> Result<SetFunction<ExtValue<Rat>>>,
{
    let calls = (dag.k as u64).saturating_mul(dag.n.max(1) as u64);
    let delta = Epsilon::new(
        eps.num,
        eps.den
            .checked_mul(calls)
            .ok_or_else(|| Error::overflow("per-call epsilon denominator"))?,
    )?;
    subtree_sweep(dag, &|f, g| solver(f, g, delta))
}
