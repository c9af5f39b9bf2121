use serde::{Deserialize, Serialize};

use super::stats::{cochran_armitage, wilson, TrendTest};
use super::{par_map, ExperimentConfig, CONFIDENCE};
use crate::boxes::{
    build_skeleton, check_a_condition, default_delta7, is_black, is_good_edge, AParams, AVariant, BlackParams,
    BoxFrame, GoodParams, GoodVariant, Skeleton, SkeletonVariant,
};
use crate::error::{Error, Result};
use crate::lattice::{EdgeId, Point};
use crate::weights::prf::derive_seed;
use crate::weights::WeightConfig;

fn one() -> f64 {
    1.0
}
fn quarter() -> f64 {
    0.25
}
fn ten_thousand() -> u64 {
    10_000
}

/// The event whose frequency is estimated. Box events use the box at the
/// origin in direction `+e_1` with sub-scale `n1 = max(2, floor(n1_fraction n))`
/// (rounded down to even for the v2 skeleton).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum EventSpec {
    /// The edge from the origin along `e_1` is good; `N` is the list value.
    GoodEdge {
        #[serde(default = "one")]
        m: f64,
        #[serde(default)]
        variant: Option<GoodVariant>,
        /// Defaults to the distribution's tail exponent.
        #[serde(default)]
        r: Option<f64>,
    },
    BlackBoxV1 {
        #[serde(default = "one")]
        m: f64,
        /// Defaults to `0.05 (E tau - F^-)`.
        #[serde(default)]
        delta7: Option<f64>,
        #[serde(default = "quarter")]
        n1_fraction: f64,
    },
    BlackBoxV2 {
        #[serde(default = "one")]
        m: f64,
        #[serde(default)]
        delta7: Option<f64>,
        #[serde(default = "quarter")]
        n1_fraction: f64,
        #[serde(default = "ten_thousand")]
        big_n: u64,
        #[serde(default)]
        r: Option<f64>,
    },
    ACondition {
        variant: AVariant,
        c: f64,
        gamma: f64,
        #[serde(default = "one")]
        m: f64,
        #[serde(default)]
        delta7: Option<f64>,
        #[serde(default = "quarter")]
        n1_fraction: f64,
        #[serde(default = "ten_thousand")]
        big_n: u64,
        #[serde(default)]
        r: Option<f64>,
    },
}

impl EventSpec {
    pub fn name(&self) -> &'static str {
        match self {
            EventSpec::GoodEdge { .. } => "good_edge",
            EventSpec::BlackBoxV1 { .. } => "black_box_v1",
            EventSpec::BlackBoxV2 { .. } => "black_box_v2",
            EventSpec::ACondition { .. } => "a_condition",
        }
    }

    fn skeleton_variant(&self) -> Option<SkeletonVariant> {
        match self {
            EventSpec::GoodEdge { .. } => None,
            EventSpec::BlackBoxV1 { .. } => Some(SkeletonVariant::V1),
            EventSpec::BlackBoxV2 { .. } => Some(SkeletonVariant::V2),
            EventSpec::ACondition { variant, .. } => {
                Some(if *variant == AVariant::A1 { SkeletonVariant::V1 } else { SkeletonVariant::V2 })
            }
        }
    }

    fn n1_fraction(&self) -> f64 {
        match *self {
            EventSpec::GoodEdge { .. } => 0.0,
            EventSpec::BlackBoxV1 { n1_fraction, .. }
            | EventSpec::BlackBoxV2 { n1_fraction, .. }
            | EventSpec::ACondition { n1_fraction, .. } => n1_fraction,
        }
    }

    fn skeleton(&self, d: usize, n: u64) -> Result<Option<Skeleton>> {
        let Some(variant) = self.skeleton_variant() else { return Ok(None) };
        let mut n1 = ((self.n1_fraction() * n as f64).floor() as i64).max(2);
        if variant == SkeletonVariant::V2 {
            n1 -= n1 % 2;
        }
        let frame = BoxFrame::new(Point::origin(d), n as i64, 1)?;
        Ok(Some(build_skeleton(&frame, n1, variant)?))
    }

    pub(super) fn validate(&self, d: usize, n_list: &[u64]) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        let m = match *self {
            EventSpec::GoodEdge { m, .. }
            | EventSpec::BlackBoxV1 { m, .. }
            | EventSpec::BlackBoxV2 { m, .. }
            | EventSpec::ACondition { m, .. } => m,
        };
        if !(m > 0.0) {
            return bad(format!("M must be positive, got {m}"));
        }
        if self.skeleton_variant().is_some() {
            let f = self.n1_fraction();
            if !(f > 0.0 && f < 1.0) {
                return bad(format!("n1_fraction must lie in (0, 1), got {f}"));
            }
        }
        if d < 2 {
            return bad("event experiments need d >= 2".into());
        }
        for &n in n_list {
            self.skeleton(d, n).map_err(|e| Error::Config(format!("n = {n}: {e}")))?;
            if matches!(self, EventSpec::GoodEdge { .. }) && n < crate::order::MIN_N {
                return bad(format!("N must be >= {}, got {n}", crate::order::MIN_N));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventRow {
    pub n: u64,
    pub trials: usize,
    pub events: u64,
    pub frequency: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Trials whose outcome could not be certified; they count as non-events.
    pub uncertified: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventReport {
    pub event: String,
    pub rows: Vec<EventRow>,
    /// Cochran-Armitage statistic with scores `log n`.
    pub trend: TrendTest,
}

struct Outcome {
    hit: bool,
    certified: bool,
}

fn trial(cfg: &ExperimentConfig, event: &EventSpec, skel: Option<&Skeleton>, n: u64, i: usize) -> Result<Outcome> {
    let weights = WeightConfig::new(cfg.dist, derive_seed(cfg.master_seed, &[n, i as u64]))?;
    let tail_r = |r: Option<f64>| r.unwrap_or_else(|| cfg.dist.tail_exponent());
    let delta = |x: Option<f64>| x.unwrap_or_else(|| default_delta7(&cfg.dist));
    let skel = || skel.expect("box events carry a skeleton");
    Ok(match *event {
        EventSpec::GoodEdge { m, variant, r } => {
            let params = GoodParams { m, big_n: n, r: tail_r(r), variant: variant.unwrap_or(GoodVariant::Subexp) };
            let e = EdgeId::along(Point::origin(cfg.d), 0);
            Outcome { hit: is_good_edge(&weights, &e, &params, None)?.good, certified: true }
        }
        EventSpec::BlackBoxV1 { m, delta7, .. } => {
            let params = BlackParams { delta7: delta(delta7), m, big_n: n.max(3), r: tail_r(None) };
            let rep = is_black(&weights, skel(), &params)?;
            Outcome { hit: rep.black, certified: rep.certified }
        }
        EventSpec::BlackBoxV2 { m, delta7, big_n, r, .. } => {
            let params = BlackParams { delta7: delta(delta7), m, big_n, r: tail_r(r) };
            let rep = is_black(&weights, skel(), &params)?;
            Outcome { hit: rep.black, certified: rep.certified }
        }
        EventSpec::ACondition { variant, c, gamma, m, delta7, big_n, r, .. } => {
            let params = AParams { c, gamma, m, big_n, r: tail_r(r), delta7: delta(delta7) };
            let rep = check_a_condition(&weights, skel(), variant, &params)?;
            Outcome { hit: rep.satisfied, certified: rep.certified }
        }
    })
}

pub(super) fn run(cfg: &ExperimentConfig, event: &EventSpec, n_list: &[u64]) -> Result<EventReport> {
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut rows = Vec::with_capacity(ns.len());
    for &n in &ns {
        let skel = event.skeleton(cfg.d, n)?;
        let out = par_map((0..cfg.samples).collect(), |i| trial(cfg, event, skel.as_ref(), n, i))?;
        let events = out.iter().filter(|o| o.hit).count() as u64;
        let uncertified = out.iter().filter(|o| !o.certified).count() as u64;
        let (ci_lo, ci_hi) = wilson(events, cfg.samples as u64, CONFIDENCE);
        rows.push(EventRow {
            n,
            trials: cfg.samples,
            events,
            frequency: events as f64 / cfg.samples as f64,
            ci_lo,
            ci_hi,
            uncertified,
        });
    }
    let scores: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let hits: Vec<u64> = rows.iter().map(|r| r.events).collect();
    let trials: Vec<u64> = rows.iter().map(|r| r.trials as u64).collect();
    Ok(EventReport { event: event.name().into(), rows, trend: cochran_armitage(&scores, &hits, &trials) })
}
