use serde::{Deserialize, Serialize};

use super::stats::{median, ols, Ols};
use super::{par_map, ExperimentConfig};
use crate::error::Result;
use crate::lattice::{BoxRegion, Point, Region};
use crate::order;
use crate::passage::{box_to_box_dag, envelope, geodesic_dag, max_weight_stats};
use crate::weights::prf::derive_seed;
use crate::weights::WeightConfig;

fn default_eta() -> f64 {
    0.1
}

/// Terminals of the scaling experiment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingMode {
    /// `0 -> N e_1`.
    #[default]
    PointToPoint,
    /// Cubes of side `log N` around both terminals.
    BoxUpper,
    /// Cubes of side `(log N)^{1 + eta}`.
    BoxLower {
        #[serde(default = "default_eta")]
        eta: f64,
    },
}

impl ScalingMode {
    fn side(&self, n: u64) -> Option<f64> {
        let l = (n as f64).ln();
        match *self {
            ScalingMode::PointToPoint => None,
            ScalingMode::BoxUpper => Some(l),
            ScalingMode::BoxLower { eta } => Some(l.powf(1.0 + eta)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub f: f64,
    pub samples: usize,
    #[serde(rename = "maxM_min")]
    pub max_min: f64,
    #[serde(rename = "maxM_med")]
    pub max_med: f64,
    #[serde(rename = "maxM_max")]
    pub max_max: f64,
    #[serde(rename = "minM_min")]
    pub min_min: f64,
    #[serde(rename = "minM_med")]
    pub min_med: f64,
    #[serde(rename = "minM_max")]
    pub min_max: f64,
    #[serde(rename = "ratio_maxM_med")]
    pub ratio_max_med: f64,
    #[serde(rename = "ratio_minM_med")]
    pub ratio_min_med: f64,
    /// Replicas whose geodesic set could not be certified inside the envelope.
    /// They are left out of every summary column.
    pub envelope_limited: usize,
}

/// Per-replica record kept in the JSON report.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReplica {
    pub n: u64,
    pub replica: usize,
    pub time: f64,
    pub max_over_geodesics: f64,
    pub min_over_geodesics: f64,
    pub envelope_limited: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    /// Tail exponent used for `f`.
    pub r: f64,
    pub rows: Vec<ScalingRow>,
    /// `log(median max M)` against `log log N`.
    pub fit_max: Option<Ols>,
    pub fit_min: Option<Ols>,
    pub replicas: Vec<ScalingReplica>,
}

fn terminal_box(centre: Point, side: f64) -> Result<Region> {
    let half = ((side.ceil() as i64).max(1) - 1) / 2;
    Ok(Region::Box(BoxRegion::centered(centre, half)?))
}

fn replica(cfg: &ExperimentConfig, mode: ScalingMode, n: u64, replica: usize) -> Result<ScalingReplica> {
    let seed = derive_seed(cfg.master_seed, &[n, replica as u64]);
    let weights = WeightConfig::new(cfg.dist, seed)?;
    let (v, w) = (Point::origin(cfg.d), Point::axis(cfg.d, 0, n as i64));
    let env = Region::Box(envelope(&v, &w, cfg.envelope_k)?);
    let dag = match mode.side(n) {
        None => geodesic_dag(&weights, v, w, &env)?,
        Some(side) => box_to_box_dag(&weights, &terminal_box(v, side)?, &terminal_box(w, side)?, &env)?,
    };
    let st = max_weight_stats(&dag)?;
    Ok(ScalingReplica {
        n,
        replica,
        time: dag.time(),
        max_over_geodesics: st.max_over_geodesics,
        min_over_geodesics: st.min_over_geodesics,
        envelope_limited: dag.boundary_reached() || dag.touches_boundary(),
    })
}

fn spread(xs: &[f64]) -> (f64, f64, f64) {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    match median(xs) {
        Some(m) => (lo, m, hi),
        None => (f64::NAN, f64::NAN, f64::NAN),
    }
}

fn log_fit(rows: &[ScalingRow], pick: impl Fn(&ScalingRow) -> f64) -> Option<Ols> {
    let (x, y): (Vec<f64>, Vec<f64>) =
        rows.iter().filter(|r| pick(r) > 0.0).map(|r| ((r.n as f64).ln().ln(), pick(r).ln())).unzip();
    ols(&x, &y)
}

pub(super) fn run(cfg: &ExperimentConfig, n_list: &[u64], mode: ScalingMode) -> Result<ScalingReport> {
    let r = cfg.dist.tail_exponent();
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let jobs: Vec<(u64, usize)> = ns.iter().flat_map(|&n| (0..cfg.samples).map(move |i| (n, i))).collect();
    let replicas = par_map(jobs, |(n, i)| replica(cfg, mode, n, i))?;
    let mut rows = Vec::with_capacity(ns.len());
    for (&n, chunk) in ns.iter().zip(replicas.chunks(cfg.samples)) {
        let f = order::f(cfg.d, r, n)?;
        let kept: Vec<&ScalingReplica> = chunk.iter().filter(|x| !x.envelope_limited).collect();
        let maxs: Vec<f64> = kept.iter().map(|x| x.max_over_geodesics).collect();
        let mins: Vec<f64> = kept.iter().map(|x| x.min_over_geodesics).collect();
        let (max_min, max_med, max_max) = spread(&maxs);
        let (min_min, min_med, min_max) = spread(&mins);
        rows.push(ScalingRow {
            n,
            f,
            samples: chunk.len(),
            max_min,
            max_med,
            max_max,
            min_min,
            min_med,
            min_max,
            ratio_max_med: max_med / f,
            ratio_min_med: min_med / f,
            envelope_limited: chunk.len() - kept.len(),
        });
    }
    let fit_max = log_fit(&rows, |r| r.max_med);
    let fit_min = log_fit(&rows, |r| r.min_med);
    Ok(ScalingReport { r, rows, fit_max, fit_min, replicas })
}
