use serde::{Deserialize, Serialize};

use super::stats::{mean, ols, sample_variance, Ols};
use super::{par_map, ExperimentConfig, CONFIDENCE};
use crate::error::Result;
use crate::lattice::Point;
use crate::passage::passage_time_full;
use crate::weights::prf::derive_seed;
use crate::weights::WeightConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub samples: usize,
    pub mean: Option<f64>,
    pub variance: Option<f64>,
    pub variance_over_n: Option<f64>,
    /// Replicas whose passage time was not certified inside the envelope;
    /// excluded from the moments.
    pub envelope_limited: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub rows: Vec<ConcentrationRow>,
    /// `variance / N` against `N`.
    pub fit: Option<Ols>,
    pub slope_ci: Option<(f64, f64)>,
}

pub(super) fn run(cfg: &ExperimentConfig, n_list: &[u64]) -> Result<ConcentrationReport> {
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let jobs: Vec<(u64, usize)> = ns.iter().flat_map(|&n| (0..cfg.samples).map(move |i| (n, i))).collect();
    let out = par_map(jobs, |(n, i)| {
        let weights = WeightConfig::new(cfg.dist, derive_seed(cfg.master_seed, &[n, i as u64]))?;
        let r = passage_time_full(&weights, Point::origin(cfg.d), Point::axis(cfg.d, 0, n as i64), cfg.envelope_k)?;
        Ok((r.time, r.boundary_reached))
    })?;
    let mut rows = Vec::with_capacity(ns.len());
    for (&n, chunk) in ns.iter().zip(out.chunks(cfg.samples)) {
        let kept: Vec<f64> = chunk.iter().filter(|x| !x.1).map(|x| x.0).collect();
        let variance = sample_variance(&kept);
        rows.push(ConcentrationRow {
            n,
            samples: chunk.len(),
            mean: mean(&kept),
            variance,
            variance_over_n: variance.map(|v| v / n as f64),
            envelope_limited: chunk.len() - kept.len(),
        });
    }
    let (x, y): (Vec<f64>, Vec<f64>) = rows.iter().filter_map(|r| r.variance_over_n.map(|v| (r.n as f64, v))).unzip();
    let fit = ols(&x, &y);
    let slope_ci = fit.and_then(|f| f.slope_ci(CONFIDENCE));
    Ok(ConcentrationReport { rows, fit, slope_ci })
}
