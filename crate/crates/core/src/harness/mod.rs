//! Monte Carlo experiments: configuration, replica scheduling and reports.
//!
//! Every replica draws its weights from a seed derived from the master seed
//! and the replica's coordinates, and results are collected in input order,
//! so reports do not depend on the number of workers.

mod concentration;
mod events;
mod output;
mod scaling;
mod simulate;
pub mod stats;
mod tail;
mod xi_verify;

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use concentration::{ConcentrationReport, ConcentrationRow};
pub use events::{EventReport, EventRow, EventSpec};
pub use scaling::{ScalingMode, ScalingReport, ScalingRow};
pub use simulate::{SimulateReport, SimulateRow};
pub use tail::{RestrictedRow, RestrictedTailReport, TailMethod, TailReport, TailRow};
pub use xi_verify::{XiVerifyReport, XiVerifyRow};

use crate::error::{Error, Result};
use crate::lattice::MAX_DIM;
use crate::order::MIN_N;
use crate::weights::DistributionSpec;

/// Confidence level of every interval in the reports.
pub const CONFIDENCE: f64 = 0.95;

fn two() -> usize {
    2
}
fn one() -> usize {
    1
}
fn default_k() -> i64 {
    2
}
fn default_dist() -> DistributionSpec {
    DistributionSpec::Exponential { rate: 1.0 }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default = "two")]
    pub d: usize,
    #[serde(default = "default_dist")]
    pub dist: DistributionSpec,
    /// Replicas (or trials) per grid point.
    #[serde(default = "one")]
    pub samples: usize,
    #[serde(default)]
    pub master_seed: u64,
    /// Envelope margin `K`: searches run in `[-K N, K N]^d`.
    #[serde(default = "default_k")]
    pub envelope_k: i64,
    /// Pool size. Not echoed in reports: results do not depend on it.
    #[serde(default = "one", skip_serializing)]
    pub workers: usize,
    /// Directory for the CSV and JSON outputs. Not echoed either.
    #[serde(default, skip_serializing)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Experiment {
    Scaling {
        n_list: Vec<u64>,
        #[serde(default)]
        mode: ScalingMode,
    },
    LdpIid {
        l_list: Vec<u64>,
        t_list: Vec<f64>,
        #[serde(default)]
        method: TailMethod,
    },
    LdpRestricted {
        l_list: Vec<u64>,
        /// Box side; defaults to `L` for each row.
        #[serde(default)]
        k1: Option<i64>,
        m2_list: Vec<f64>,
    },
    EventProb {
        event: EventSpec,
        /// `N` for edge events, the box scale `n` for box events.
        n_list: Vec<u64>,
    },
    Concentration {
        n_list: Vec<u64>,
    },
    XiVerify {
        d_list: Vec<usize>,
        m_min: i64,
        m_max: i64,
    },
    Simulate {
        n_list: Vec<u64>,
    },
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::Scaling { .. } => "scaling",
            Experiment::LdpIid { .. } => "ldp_iid",
            Experiment::LdpRestricted { .. } => "ldp_restricted",
            Experiment::EventProb { .. } => "event_prob",
            Experiment::Concentration { .. } => "concentration",
            Experiment::XiVerify { .. } => "xi_verify",
            Experiment::Simulate { .. } => "simulate",
        }
    }
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

fn check_n_list(ns: &[u64]) -> Result<()> {
    if ns.is_empty() {
        return config_err("n_list must not be empty");
    }
    if let Some(n) = ns.iter().find(|&&n| n < MIN_N) {
        return config_err(format!("N values must be >= {MIN_N}, got {n}"));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 1 {
            return config_err("samples must be >= 1");
        }
        if self.workers < 1 {
            return config_err("workers must be >= 1");
        }
        if !(1..=MAX_DIM).contains(&self.d) {
            return config_err(format!("d must be in 1..={MAX_DIM}, got {}", self.d));
        }
        if self.envelope_k < 1 {
            return config_err("envelope_k must be >= 1");
        }
        self.dist.validate().map_err(|e| Error::Config(e.to_string()))?;
        match &self.experiment {
            Experiment::Scaling { n_list, mode } => {
                check_n_list(n_list)?;
                if self.d < 2 {
                    return config_err("scaling needs d >= 2");
                }
                if let ScalingMode::BoxLower { eta } = mode {
                    if !(*eta > 0.0) {
                        return config_err("eta must be positive");
                    }
                }
            }
            Experiment::Concentration { n_list } | Experiment::Simulate { n_list } => check_n_list(n_list)?,
            Experiment::LdpIid { l_list, t_list, .. } => {
                if l_list.is_empty() || t_list.is_empty() || l_list.contains(&0) {
                    return config_err("l_list and t_list must be nonempty with L >= 1");
                }
                let mean = self.dist.mean();
                if let Some(t) = t_list.iter().find(|&&t| !(t > mean)) {
                    return config_err(format!("t = {t} is not above the mean {mean}"));
                }
            }
            Experiment::LdpRestricted { l_list, k1, m2_list } => {
                if l_list.is_empty() || m2_list.is_empty() || l_list.contains(&0) {
                    return config_err("l_list and m2_list must be nonempty with L >= 1");
                }
                for &l in l_list {
                    let k = k1.unwrap_or(l as i64);
                    if k < 0 || k > 2 * l as i64 + 1 {
                        return config_err(format!("k1 = {k} is outside 0..=2L+1 for L = {l}"));
                    }
                }
            }
            Experiment::EventProb { event, n_list } => {
                if n_list.is_empty() {
                    return config_err("n_list must not be empty");
                }
                event.validate(self.d, n_list)?;
            }
            Experiment::XiVerify { d_list, m_min, m_max } => {
                if d_list.is_empty() || d_list.iter().any(|d| !(1..=MAX_DIM).contains(d)) {
                    return config_err("d_list must be nonempty with entries in the supported range");
                }
                if m_min < &0 || m_max < m_min {
                    return config_err("need 0 <= m_min <= m_max");
                }
            }
        }
        Ok(())
    }
}

/// The result of one experiment together with the configuration that
/// produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub result: ReportBody,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportBody {
    Scaling(ScalingReport),
    LdpIid(TailReport),
    LdpRestricted(RestrictedTailReport),
    EventProb(EventReport),
    Concentration(ConcentrationReport),
    XiVerify(XiVerifyReport),
    Simulate(SimulateReport),
}

/// Validates `config` and runs it on a pool of `config.workers` threads.
pub fn run(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", config.workers)))?;
    let result = pool.install(|| -> Result<ReportBody> {
        Ok(match &config.experiment {
            Experiment::Scaling { n_list, mode } => ReportBody::Scaling(scaling::run(config, n_list, *mode)?),
            Experiment::LdpIid { l_list, t_list, method } => {
                ReportBody::LdpIid(tail::run_iid(config, l_list, t_list, *method)?)
            }
            Experiment::LdpRestricted { l_list, k1, m2_list } => {
                ReportBody::LdpRestricted(tail::run_restricted(config, l_list, *k1, m2_list)?)
            }
            Experiment::EventProb { event, n_list } => ReportBody::EventProb(events::run(config, event, n_list)?),
            Experiment::Concentration { n_list } => ReportBody::Concentration(concentration::run(config, n_list)?),
            Experiment::XiVerify { d_list, m_min, m_max } => {
                ReportBody::XiVerify(xi_verify::run(d_list, *m_min, *m_max)?)
            }
            Experiment::Simulate { n_list } => ReportBody::Simulate(simulate::run(config, n_list)?),
        })
    })?;
    Ok(Report { config: config.clone(), result })
}

/// Maps `f` over `items` on the current pool, keeping input order.
pub(crate) fn par_map<T, R, F>(items: Vec<T>, f: F) -> Result<Vec<R>>
where
    T: Send,
    R: Send,
    F: Fn(T) -> Result<R> + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}
