//! Minimum-cost k-coloring: color costs c(v, i), independent-set-gated
//! per-color cost functions s_i, and their k-fold min-sum convolution.

use num::BigRational;

use crate::error::{Error, Result};
use crate::lattice::bounded_minsum;
use crate::setfn::{submasks, SetFunction};
use crate::value::{ApproxScalar, Epsilon, ExtValue, Finite, Infinity, Rat};
use crate::IntSetFunction;

pub const MAX_COLORING_VERTICES: u32 = 22;

/// Undirected graph with per-vertex, per-color costs.
#[derive(Debug, Clone)]
pub struct Graph {
    n: u32,
    adjacency: Vec<u32>,
    /// costs[v][i] = c(v, i), v ∈ [n], i ∈ [k].
    costs: Vec<Vec<i64>>,
}

impl Graph {
    /// Vertices are 0-based here; edge endpoints must be distinct.
    pub fn new(n: u32, edges: &[(u32, u32)], costs: Vec<Vec<i64>>) -> Result<Self> {
        if n > MAX_COLORING_VERTICES {
            return Err(Error::OrderTooLarge(n, MAX_COLORING_VERTICES));
        }
        if costs.len() != n as usize {
            return Err(Error::domain("cost table must have one row per vertex"));
        }
        let k = costs.first().map_or(0, |r| r.len());
        if costs.iter().any(|r| r.len() != k) {
            return Err(Error::domain("cost rows must all have the same width"));
        }
        let mut adjacency = vec![0u32; n as usize];
        for &(u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(Error::domain(format!("bad edge ({u}, {v})")));
            }
            adjacency[u as usize] |= 1 << v;
            adjacency[v as usize] |= 1 << u;
        }
        Ok(Graph { n, adjacency, costs })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn colors(&self) -> usize {
        self.costs.first().map_or(0, |r| r.len())
    }

    pub fn adjacency(&self) -> &[u32] {
        &self.adjacency
    }

    pub fn costs(&self) -> &[Vec<i64>] {
        &self.costs
    }
}

/// Indicator of the independent subsets, by the lowest-bit recurrence:
/// X is independent iff X ∖ {v} is and v has no neighbor in X.
pub fn independent_set_table(g: &Graph) -> SetFunction<bool> {
    let mut table = vec![false; 1 << g.n];
    table[0] = true;
    for mask in 1..1u32 << g.n {
        let v = mask.trailing_zeros() as usize;
        table[mask as usize] = table[(mask & (mask - 1)) as usize] && g.adjacency[v] & mask == 0;
    }
    SetFunction::new(g.n, table).expect("dimensions fixed above")
}

/// s_i(X) = Σ_{x ∈ X} c(x, i) when X is independent, else ∞.
pub fn color_cost_function(g: &Graph, i: usize) -> Result<SetFunction<ExtValue<i64>>> {
    if i >= g.colors() {
        return Err(Error::domain(format!("color {i} out of range")));
    }
    let independent = independent_set_table(g);
    let mut sums = vec![0i64; 1 << g.n];
    for mask in 1..1u32 << g.n {
        let v = mask.trailing_zeros() as usize;
        sums[mask as usize] = sums[(mask & (mask - 1)) as usize] + g.costs[v][i];
    }
    SetFunction::from_fn(g.n, |mask| {
        if independent[mask] {
            Finite(sums[mask as usize])
        } else {
            Infinity
        }
    })
}

/// Exact minimum cost of a proper k-coloring (∞ if the graph is not
/// k-colorable), with an optional witness coloring. Negative costs are
/// handled by shifting every cost up by max|c| — each vertex is colored
/// exactly once, so the shift adds exactly n·max|c| to every coloring.
pub fn kcoloring_exact(g: &Graph, want_witness: bool) -> Result<(ExtValue<i64>, Option<Vec<u8>>)> {
    let k = g.colors();
    if k < 1 {
        return Err(Error::domain("at least one color required"));
    }
    let n = g.n;
    let shift: i64 = g.costs.iter().flatten().map(|c| c.abs()).max().unwrap_or(0);
    let total_shift = shift * n as i64;
    let full = (1u32 << n) - 1;

    // shifted, nonnegative tables
    let tables: Vec<IntSetFunction> = (0..k)
        .map(|i| {
            let s = color_cost_function(g, i)?;
            SetFunction::from_fn(n, |mask| match s[mask] {
                Finite(x) => Finite((x + mask.count_ones() as i64 * shift) as u64),
                _ => Infinity,
            })
        })
        .collect::<Result<_>>()?;

    let bound = tables
        .iter()
        .flat_map(|t| t.values())
        .filter_map(|v| v.finite())
        .max()
        .unwrap_or(0);

    let mut chain: Vec<IntSetFunction> = vec![tables[0].clone()];
    for t in &tables[1..] {
        let prev = chain.last().unwrap();
        let step_bound = bound.max(
            prev.values().iter().filter_map(|v| v.finite()).max().unwrap_or(0),
        );
        chain.push(bounded_minsum(prev, t, step_bound)?);
    }

    let value = chain.last().unwrap()[full].map(|x| x as i64 - total_shift);
    if !want_witness || !value.is_finite() {
        return Ok((value, None));
    }

    // Back-scan: peel color classes off the chain from the last color down.
    let mut colors = vec![0u8; n as usize];
    let mut s = full;
    for i in (1..k).rev() {
        let target = chain[i][s].finite().expect("witness exists on feasible chain");
        let mut found = false;
        for t in submasks(s) {
            if let (Finite(a), Finite(b)) = (chain[i - 1][t], tables[i][s ^ t]) {
                if a + b == target {
                    for v in 0..n {
                        if (s ^ t) & (1 << v) != 0 {
                            colors[v as usize] = i as u8;
                        }
                    }
                    s = t;
                    found = true;
                    break;
                }
            }
        }
        debug_assert!(found, "chain value must decompose");
    }
    // remaining vertices take color 0
    Ok((value, Some(colors)))
}

/// Largest δ of the form a/2^20 with (1+δ)^(k−1) ≤ 1+ε, verified in exact
/// big-rational arithmetic, so the compounded per-step guarantee stays
/// within (1+ε).
pub fn per_step_delta(eps: Epsilon, k: u32) -> Result<Epsilon> {
    debug_assert!(k >= 2);
    const GRID: u64 = 1 << 20;
    let target = BigRational::new((eps.den + eps.num).into(), eps.den.into());
    let fits = |a: u64| -> bool {
        let step = BigRational::new((GRID + a).into(), GRID.into());
        num_traits::pow::pow(step, (k - 1) as usize) <= target
    };
    if !fits(1) {
        return Err(Error::domain("epsilon too small for this k"));
    }
    let mut lo = 1u64; // fits
    let mut hi = GRID.saturating_mul(4); // 1+δ ≤ 5 is plenty: (1+ε) < 2
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Epsilon::new(lo, GRID)
}

/// (1+ε)-approximate minimum k-coloring cost. Requires nonnegative costs
/// (a multiplicative guarantee on a possibly-negative optimum is ill-posed);
/// each of the k−1 chained convolutions runs at δ = (1+ε)^{1/(k−1)} − 1.
pub fn kcoloring_approx<F>(g: &Graph, eps: Epsilon, solver: F) -> Result<ExtValue<Rat>>
where
    F: Fn(
        &SetFunction<ExtValue<Rat>>,
        &SetFunction<ExtValue<Rat>>,
        Epsilon,
    ) -> Result<SetFunction<ExtValue<Rat>>>,
{
    let k = g.colors();
    if k < 1 {
        return Err(Error::domain("at least one color required"));
    }
    if g.costs.iter().flatten().any(|&c| c < 0) {
        return Err(Error::domain(
            "approximate mode requires nonnegative color costs",
        ));
    }
    let full = (1u32 << g.n) - 1;
    let rat_table = |i: usize| -> Result<SetFunction<ExtValue<Rat>>> {
        Ok(color_cost_function(g, i)?.map(|v| v.map(|x| Rat::from_u64(x as u64))))
    };
    if k == 1 {
        return Ok(rat_table(0)?[full]);
    }
    let delta = per_step_delta(eps, k as u32)?;
    let mut acc = rat_table(0)?;
    for i in 1..k {
        acc = solver(&acc, &rat_table(i)?, delta)?;
    }
    Ok(acc[full])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::{approx_minsum_strong, ApproxParams};

    fn triangle(cost: i64) -> Graph {
        let costs = vec![vec![cost; 3]; 3];
        Graph::new(3, &[(0, 1), (1, 2), (0, 2)], costs).unwrap()
    }

    #[test]
    fn independent_sets_of_k3() {
        let t = independent_set_table(&triangle(1));
        let expect = |m: u32| m.count_ones() <= 1;
        for m in 0..8 {
            assert_eq!(t[m], expect(m), "mask {m}");
        }
    }

    #[test]
    fn independent_sets_edge_cases() {
        let edgeless = Graph::new(2, &[], vec![vec![0]; 2]).unwrap();
        assert!(independent_set_table(&edgeless).values().iter().all(|&b| b));
        let edge = Graph::new(2, &[(0, 1)], vec![vec![0]; 2]).unwrap();
        assert_eq!(independent_set_table(&edge).values(), &[true, true, true, false]);
    }

    #[test]
    fn color_costs_on_triangle() {
        let s = color_cost_function(&triangle(1), 0).unwrap();
        assert_eq!(s[0], Finite(0));
        for m in [1u32, 2, 4] {
            assert_eq!(s[m], Finite(1));
        }
        for m in [3u32, 5, 6, 7] {
            assert_eq!(s[m], Infinity);
        }
    }

    #[test]
    fn triangle_needs_three_colors() {
        let (v3, w) = kcoloring_exact(&triangle(1), true).unwrap();
        assert_eq!(v3, Finite(3));
        let w = w.unwrap();
        assert_eq!(w.len(), 3);
        assert!(w[0] != w[1] && w[1] != w[2] && w[0] != w[2]);

        let two = Graph::new(3, &[(0, 1), (1, 2), (0, 2)], vec![vec![1; 2]; 3]).unwrap();
        assert_eq!(kcoloring_exact(&two, false).unwrap().0, Infinity);
    }

    #[test]
    fn single_vertex_single_color() {
        let g = Graph::new(1, &[], vec![vec![5]]).unwrap();
        assert_eq!(kcoloring_exact(&g, false).unwrap().0, Finite(5));
        let approx = kcoloring_approx(&g, Epsilon::parse("0.5").unwrap(), |a, b, e| {
            approx_minsum_strong(a, b, ApproxParams::new(e)?)
        })
        .unwrap();
        assert_eq!(approx, Finite(Rat::from_integer(5)));
    }

    #[test]
    fn negative_costs_shift_exactly() {
        let g = Graph::new(2, &[(0, 1)], vec![vec![-3, 2], vec![1, -4]]).unwrap();
        // proper 2-colorings: (0→c0, 1→c1) = −3 + (−4) = −7; (0→c1, 1→c0) = 3
        assert_eq!(kcoloring_exact(&g, false).unwrap().0, Finite(-7));
    }

    #[test]
    fn approx_sandwich_on_triangle() {
        let eps = Epsilon::parse("0.25").unwrap();
        let v = kcoloring_approx(&triangle(2), eps, |a, b, e| {
            approx_minsum_strong(a, b, ApproxParams::new(e)?)
        })
        .unwrap()
        .finite()
        .unwrap();
        assert!(v >= Rat::from_integer(6) && v <= Rat::new(30, 4), "{v:?}");
    }

    #[test]
    fn delta_compounds_within_eps() {
        let eps = Epsilon::parse("0.1").unwrap();
        let d = per_step_delta(eps, 5).unwrap();
        let step = BigRational::new((d.den + d.num).into(), d.den.into());
        let total = num_traits::pow::pow(step, 4);
        assert!(total <= BigRational::new(11.into(), 10.into()));
        assert!(d.num > 0);
    }
}
