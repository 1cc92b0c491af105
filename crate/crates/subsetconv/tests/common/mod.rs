//! Helpers shared across the integration suites: seeded instance generation
//! and the independent brute-force oracles.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subsetconv::apps::{ColoredDag, Graph};
use subsetconv::setfn::{submasks, SetFunction};
use subsetconv::value::{ExtValue, Finite, Infinity, Rat};
use subsetconv::IntSetFunction;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random integer set function: values in [0, max], each entry ∞ with
/// probability `inf_frac`; `pool` restricts to few distinct values so that
/// duplicates are common.
pub fn rand_int_fn(
    n: u32,
    max: u64,
    inf_frac: f64,
    pool: Option<usize>,
    rng: &mut ChaCha8Rng,
) -> IntSetFunction {
    let pool_vals: Option<Vec<u64>> =
        pool.map(|p| (0..p).map(|_| rng.gen_range(0..=max)).collect());
    SetFunction::from_fn(n, |_| {
        if inf_frac > 0.0 && rng.gen_bool(inf_frac) {
            Infinity
        } else {
            let v = match &pool_vals {
                Some(vals) => vals[rng.gen_range(0..vals.len())],
                None => rng.gen_range(0..=max),
            };
            Finite(v)
        }
    })
    .unwrap()
}

pub fn to_rat_fn(f: &IntSetFunction) -> SetFunction<ExtValue<Rat>> {
    f.map(|v| v.map(|x| Rat::from_integer(x as i128)))
}

pub fn rat_int(x: i64) -> Rat {
    Rat::from_integer(x as i128)
}

/// Minimum proper-coloring cost by enumerating all k^n assignments.
pub fn brute_force_coloring(g: &Graph) -> ExtValue<i64> {
    let n = g.n() as usize;
    let k = g.colors();
    let mut best: ExtValue<i64> = Infinity;
    let mut assignment = vec![0usize; n];
    loop {
        let proper = (0..n).all(|v| {
            (v + 1..n).all(|u| {
                g.adjacency()[v] & (1 << u) == 0 || assignment[v] != assignment[u]
            })
        });
        if proper {
            let cost: i64 = (0..n).map(|v| g.costs()[v][assignment[v]]).sum();
            if Finite(cost) < best {
                best = Finite(cost);
            }
        }
        // odometer increment over [k]^n
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            assignment[i] += 1;
            if assignment[i] < k {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}

/// Maximum colorful subtree weight by enumerating every subset of edges and
/// checking the tree + distinct-colors conditions directly. Exponential in
/// |E|; callers keep instances small.
pub fn brute_force_subtree(dag: &ColoredDag) -> ExtValue<Rat> {
    let mut edges: Vec<(usize, usize, Rat)> = Vec::new();
    for (u, outs) in dag.out_edges().iter().enumerate() {
        for (v, w) in outs {
            edges.push((u, *v, *w));
        }
    }
    assert!(edges.len() <= 20, "oracle instance too large");
    let mut best: ExtValue<Rat> = if dag.n() == 0 {
        subsetconv::value::NegInfinity
    } else {
        Finite(Rat::from_integer(0)) // any single vertex
    };
    for picked in 0..1u64 << edges.len() {
        let chosen: Vec<&(usize, usize, Rat)> = (0..edges.len())
            .filter(|i| picked >> i & 1 == 1)
            .map(|i| &edges[i])
            .collect();
        if chosen.is_empty() {
            continue;
        }
        let mut verts: Vec<usize> = chosen.iter().flat_map(|&&(u, v, _)| [u, v]).collect();
        verts.sort_unstable();
        verts.dedup();
        // every vertex except one root has exactly one incoming chosen edge
        let indeg = |v: usize| chosen.iter().filter(|&&&(_, t, _)| t == v).count();
        let roots: Vec<usize> = verts.iter().copied().filter(|&v| indeg(v) == 0).collect();
        if roots.len() != 1 || verts.iter().any(|&v| indeg(v) > 1) {
            continue;
        }
        if verts.len() != chosen.len() + 1 {
            continue;
        }
        // in-degree ≤ 1 everywhere + |V| = |E| + 1 + single root ⇒ tree
        let mut colors: Vec<u32> = verts.iter().map(|&v| dag.colors()[v]).collect();
        colors.sort_unstable();
        colors.dedup();
        if colors.len() != verts.len() {
            continue;
        }
        let weight: Rat = chosen.iter().map(|&&(_, _, w)| w).sum();
        if Finite(weight) > best {
            best = Finite(weight);
        }
    }
    best
}

/// Small random cost graph for the coloring oracle tests.
pub fn rand_graph(n: u32, k: usize, edge_prob: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(edge_prob) {
                edges.push((u, v));
            }
        }
    }
    let costs = (0..n)
        .map(|_| (0..k).map(|_| rng.gen_range(0..50)).collect())
        .collect();
    Graph::new(n, &edges, costs).unwrap()
}

/// Small random colored DAG with at most `max_edges` edges (oracle budget).
pub fn rand_dag(n: usize, k: u32, edge_prob: f64, max_edges: usize, rng: &mut ChaCha8Rng) -> ColoredDag {
    let colors: Vec<u32> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if edges.len() < max_edges && rng.gen_bool(edge_prob) {
                edges.push((u, v, Rat::from_integer(rng.gen_range(0..100))));
            }
        }
    }
    ColoredDag::new(colors, &edges, k).unwrap()
}

/// True iff ∃ an optimal split of S with ratio outside [ε/4, 4/ε]
/// (first slot) / inside (second slot); used by the conditional-guarantee
/// criterion to certify instances.
pub fn optimal_split_kinds(
    f: &IntSetFunction,
    g: &IntSetFunction,
    s: u32,
    eps_num: u64,
    eps_den: u64,
) -> (bool, bool) {
    let mut best: ExtValue<u64> = Infinity;
    for t in submasks(s) {
        if let (Finite(a), Finite(b)) = (f[t], g[s ^ t]) {
            best = best.min(Finite(a + b));
        }
    }
    let Finite(opt) = best else { return (false, false) };
    let (mut distant, mut close) = (false, false);
    for t in submasks(s) {
        if let (Finite(a), Finite(b)) = (f[t], g[s ^ t]) {
            if a + b != opt {
                continue;
            }
            // a/b < ε/4 or a/b > 4/ε, as u128 cross-products
            let lo = 4 * a as u128 * (eps_den as u128) < b as u128 * eps_num as u128;
            let hi = a as u128 * (eps_num as u128) > 4 * b as u128 * eps_den as u128;
            let is_distant = match (a, b) {
                (0, 0) => false,
                (0, _) | (_, 0) => true,
                _ => lo || hi,
            };
            if is_distant {
                distant = true;
            } else {
                close = true;
            }
        }
    }
    (distant, close)
}
