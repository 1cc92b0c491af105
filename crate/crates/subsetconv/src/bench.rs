//! Wall-clock micro-benchmark harness: times the convolution kernels over an
//! n-sweep and reports per-step growth factors (the asymptotic "slope").

use std::time::Instant;

use crate::error::{Error, Result};
use crate::gen::{gen_setfn, Dist};
use crate::lattice::{fast_sumproduct, naive_tropical};
use crate::minmax::minmax_convolution;
use crate::modular::Mod61;
use crate::semiring::TropicalOp;
use crate::setfn::SetFunction;

pub const CSV_SCHEMA_VERSION: u32 = 1;
pub const CSV_HEADER: &str = "schema,algorithm,n,m,eps,seconds,family_size,max_ratio";

#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub algorithm: String,
    pub n: u32,
    pub m: u64,
    pub eps: Option<String>,
    pub seconds: f64,
    pub family_size: Option<usize>,
    pub max_ratio: Option<f64>,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        let opt_u = |v: &Option<usize>| v.map_or(String::new(), |x| x.to_string());
        format!(
            "{},{},{},{},{},{:.6},{},{}",
            CSV_SCHEMA_VERSION,
            self.algorithm,
            self.n,
            self.m,
            self.eps.clone().unwrap_or_default(),
            self.seconds,
            opt_u(&self.family_size),
            self.max_ratio.map_or(String::new(), |r| format!("{r:.6}")),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchAlgo {
    NaiveMinSum,
    MinMaxChunked,
    FastSumProduct,
}

impl BenchAlgo {
    pub fn id(&self) -> &'static str {
        match self {
            BenchAlgo::NaiveMinSum => "naive-minsum",
            BenchAlgo::MinMaxChunked => "minmax-chunked",
            BenchAlgo::FastSumProduct => "fast-sumproduct",
        }
    }

    /// Expected wall-time growth per unit increase of n.
    pub fn expected_step_factor(&self) -> f64 {
        match self {
            BenchAlgo::NaiveMinSum => 3.0,
            BenchAlgo::MinMaxChunked => 2.0f64.powf(1.5),
            BenchAlgo::FastSumProduct => 2.0,
        }
    }
}

/// Times one run of `algo` on a seeded instance of order n; the returned
/// f64 is the checksum-ish value that keeps the optimizer honest.
pub fn time_once(algo: BenchAlgo, n: u32, m: u64, seed: u64) -> Result<(f64, f64)> {
    let f = gen_setfn(n, Dist::Uniform(m), 0.05, seed)?.to_int()?;
    let g = gen_setfn(n, Dist::Uniform(m), 0.05, seed ^ 0x9e3779b9)?.to_int()?;
    let start = Instant::now();
    let sink = match algo {
        BenchAlgo::NaiveMinSum => {
            let h = naive_tropical(TropicalOp::MinSum, &f, &g)?;
            h.values().iter().filter_map(|v| v.finite()).sum::<u64>() as f64
        }
        BenchAlgo::MinMaxChunked => {
            let h = minmax_convolution(&f, &g)?;
            h.values().iter().filter_map(|v| v.finite()).sum::<u64>() as f64
        }
        BenchAlgo::FastSumProduct => {
            let fm = SetFunction::from_fn(n, |s| Mod61::new(f[s].finite().unwrap_or(0)))?;
            let gm = SetFunction::from_fn(n, |s| Mod61::new(g[s].finite().unwrap_or(0)))?;
            let h = fast_sumproduct(&fm, &gm)?;
            h.values().iter().map(|v| v.value() as f64).sum()
        }
    };
    Ok((start.elapsed().as_secs_f64(), sink))
}

/// Median-of-`reps` timings over n ∈ [n_lo, n_hi]; one record per n.
pub fn sweep(algo: BenchAlgo, n_lo: u32, n_hi: u32, m: u64, reps: u32, seed: u64) -> Result<Vec<BenchRecord>> {
    if n_lo > n_hi {
        return Err(Error::domain("empty n range"));
    }
    let mut records = Vec::new();
    for n in n_lo..=n_hi {
        let mut times: Vec<f64> = (0..reps.max(1))
            .map(|r| time_once(algo, n, m, seed.wrapping_add(r as u64)).map(|(t, _)| t))
            .collect::<Result<_>>()?;
        times.sort_by(f64::total_cmp);
        records.push(BenchRecord {
            algorithm: algo.id().into(),
            n,
            m,
            eps: None,
            seconds: times[times.len() / 2],
            family_size: None,
            max_ratio: None,
        });
    }
    Ok(records)
}

/// Geometric mean of the per-step time ratios of a sweep.
pub fn mean_step_factor(records: &[BenchRecord]) -> Option<f64> {
    let steps: Vec<f64> = records
        .windows(2)
        .filter(|w| w[0].seconds > 0.0 && w[1].seconds > 0.0)
        .map(|w| w[1].seconds / w[0].seconds)
        .collect();
    if steps.is_empty() {
        return None;
    }
    let log_sum: f64 = steps.iter().map(|r| r.ln()).sum();
    Some((log_sum / steps.len() as f64).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_row_shape() {
        let rec = BenchRecord {
            algorithm: "naive-minsum".into(),
            n: 10,
            m: 1024,
            eps: None,
            seconds: 0.125,
            family_size: Some(12),
            max_ratio: Some(1.05),
        };
        assert_eq!(rec.csv_row(), "1,naive-minsum,10,1024,,0.125000,12,1.050000");
        assert_eq!(CSV_HEADER.split(',').count(), rec.csv_row().split(',').count());
    }

    #[test]
    fn sweep_produces_one_record_per_n() {
        let recs = sweep(BenchAlgo::FastSumProduct, 4, 6, 64, 1, 9).unwrap();
        assert_eq!(recs.len(), 3);
        assert!(recs.iter().all(|r| r.seconds >= 0.0));
    }

    #[test]
    fn step_factor_of_exact_doubling() {
        let mk = |s: f64| BenchRecord {
            algorithm: "x".into(),
            n: 0,
            m: 0,
            eps: None,
            seconds: s,
            family_size: None,
            max_ratio: None,
        };
        let recs: Vec<_> = [1.0, 2.0, 4.0, 8.0].into_iter().map(mk).collect();
        let f = mean_step_factor(&recs).unwrap();
        assert!((f - 2.0).abs() < 1e-12);
    }
}
