//! Seeded instance generators. Everything is deterministic in the seed
//! (ChaCha8), so fixtures and regression corpora are reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::io::{DagFile, GraphFile, Meta, SetFunctionFile, ValueRepr};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dist {
    /// uniform integers in [0, M]
    Uniform(u64),
    /// M / (1 + X) for X uniform in [0, M): heavy head, long tail
    PowerLaw(u64),
    /// half the mass near 0, half near M
    Bimodal(u64),
}

impl Dist {
    /// "uniform:M", "powerlaw:M", or "bimodal:M"
    pub fn parse(s: &str) -> Result<Dist> {
        let bad = || Error::domain(format!("cannot parse distribution {s:?}"));
        let (name, m) = s.split_once(':').ok_or_else(bad)?;
        let m: u64 = m.trim().parse().map_err(|_| bad())?;
        match name.trim() {
            "uniform" => Ok(Dist::Uniform(m)),
            "powerlaw" => Ok(Dist::PowerLaw(m)),
            "bimodal" => Ok(Dist::Bimodal(m)),
            _ => Err(bad()),
        }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> u64 {
        match *self {
            Dist::Uniform(m) => rng.gen_range(0..=m),
            Dist::PowerLaw(m) => {
                if m == 0 {
                    0
                } else {
                    m / (1 + rng.gen_range(0..m))
                }
            }
            Dist::Bimodal(m) => {
                let spread = m / 8;
                let base = if rng.gen_bool(0.5) { 0 } else { m.saturating_sub(spread) };
                base + rng.gen_range(0..=spread)
            }
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Dist::Uniform(_) => "uniform",
            Dist::PowerLaw(_) => "powerlaw",
            Dist::Bimodal(_) => "bimodal",
        }
    }

    fn magnitude(&self) -> u64 {
        match *self {
            Dist::Uniform(m) | Dist::PowerLaw(m) | Dist::Bimodal(m) => m,
        }
    }
}

/// Random nonnegative-integer set function with an independent `inf_frac`
/// chance of ∞ at each subset.
pub fn gen_setfn(n: u32, dist: Dist, inf_frac: f64, seed: u64) -> Result<SetFunctionFile> {
    if !(0.0..=1.0).contains(&inf_frac) {
        return Err(Error::domain("inf-frac must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..1usize << n)
        .map(|_| {
            if inf_frac > 0.0 && rng.gen_bool(inf_frac) {
                ValueRepr::Str("inf".into())
            } else {
                ValueRepr::Num(dist.sample(&mut rng) as f64)
            }
        })
        .collect();
    Ok(SetFunctionFile {
        n,
        values,
        meta: Some(Meta {
            seed: Some(seed),
            generator: Some(format!("{}:{} inf-frac={}", dist.name(), dist.magnitude(), inf_frac)),
        }),
    })
}

/// G(n, p) graph with uniform costs in [0, cost_max] (file edges 1-based).
pub fn gen_graph(n: u32, k: u32, edge_prob: f64, cost_max: u64, seed: u64) -> Result<GraphFile> {
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::domain("edge-prob must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(edge_prob) {
                edges.push([u, v]);
            }
        }
    }
    let costs = (0..n)
        .map(|_| (0..k).map(|_| rng.gen_range(0..=cost_max) as i64).collect())
        .collect();
    Ok(GraphFile { n, k, edges, costs })
}

/// Random colored DAG: edges only from lower to higher vertex index (so the
/// result is acyclic by construction), integer weights in [0, weight_max].
pub fn gen_dag(n: u32, k: u32, edge_prob: f64, weight_max: u64, seed: u64) -> Result<DagFile> {
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::domain("edge-prob must lie in [0, 1]"));
    }
    if k == 0 {
        return Err(Error::domain("need at least one color"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let colors = (0..n).map(|_| rng.gen_range(1..=k)).collect();
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(edge_prob) {
                edges.push((u, v, rng.gen_range(0..=weight_max) as f64));
            }
        }
    }
    Ok(DagFile { n, k, colors, edges })
}
