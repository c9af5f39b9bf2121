use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::stats::{mean, ols, wilson, z_two_sided, Ols};
use super::{par_map, ExperimentConfig, CONFIDENCE};
use crate::error::{Error, Result};
use crate::lattice::{Point, Region};
use crate::order;
use crate::passage::{passage_time, MAX_SEARCH_VERTICES};
use crate::weights::prf::{derive_seed, hash_words, unit_open};
use crate::weights::{DistributionSpec, WeightConfig};

/// Samples per parallel block; blocks are merged in order.
const BLOCK: usize = 4096;

/// Estimator for `P(X_1 + ... + X_L >= L t)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailMethod {
    /// Importance sampling for Weibull-type tails, plain counting otherwise.
    #[default]
    Auto,
    Plain,
    /// Draws from the same family with the scale tilted so that the mean is
    /// `t`, reweighted by the likelihood ratio. Weibull-type tails only.
    Importance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    #[serde(rename = "L")]
    pub l: u64,
    pub t: f64,
    pub samples: usize,
    /// Raw hits; under importance sampling these are hits of the tilted draws.
    pub exceedances: u64,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub half_width: f64,
    /// `-log p_hat`, absent when nothing exceeded.
    pub neg_log_p: Option<f64>,
    /// `t^r L`.
    pub ref_exponent: f64,
    pub method: TailMethod,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub r: f64,
    pub rows: Vec<TailRow>,
    /// `-log p_hat` against `t^r L` over rows with at least one exceedance.
    pub fit: Option<Ols>,
}

#[derive(Default, Clone, Copy)]
struct Acc {
    hits: u64,
    sum: f64,
    sum_sq: f64,
}

/// Proposal for importance sampling: same shape `r`, scale stretched so the
/// mean is `t`, and the per-draw log likelihood ratio.
struct Tilt {
    r: f64,
    a: f64,
    b: f64,
}

impl Tilt {
    fn new(dist: &DistributionSpec, t: f64) -> Option<Tilt> {
        let (r, a) = match *dist {
            DistributionSpec::WeibullTail { r, scale } => (r, scale),
            DistributionSpec::Exponential { rate } => (1.0, 1.0 / rate),
            _ => return None,
        };
        let b = t / gamma(1.0 + 1.0 / r);
        (b > a).then_some(Tilt { r, a, b })
    }

    fn draw(&self, u: f64) -> f64 {
        self.b * (-u.ln()).powf(1.0 / self.r)
    }

    /// `log p(x) - log q(x)` for Weibull densities of scales `a`, `b`.
    fn log_ratio(&self, x: f64) -> f64 {
        self.r * (self.b / self.a).ln() - (x / self.a).powf(self.r) + (x / self.b).powf(self.r)
    }
}

fn cell(cfg: &ExperimentConfig, l: u64, t: f64, method: TailMethod) -> Result<TailRow> {
    let tilt = match method {
        TailMethod::Plain => None,
        TailMethod::Auto => Tilt::new(&cfg.dist, t),
        TailMethod::Importance => Some(Tilt::new(&cfg.dist, t).ok_or_else(|| {
            Error::Config(format!(
                "importance sampling needs a Weibull-type tail and t above the mean, got {}",
                cfg.dist.name()
            ))
        })?),
    };
    let seed = derive_seed(cfg.master_seed, &[l, t.to_bits()]);
    let level = l as f64 * t;
    let blocks: Vec<usize> = (0..cfg.samples.div_ceil(BLOCK)).collect();
    let parts = par_map(blocks, |b| {
        let mut acc = Acc::default();
        for i in b * BLOCK..((b + 1) * BLOCK).min(cfg.samples) {
            let mut s = 0.0;
            let mut log_w = 0.0;
            for j in 0..l {
                let u = unit_open(hash_words(seed, &[i as u64, j]));
                match &tilt {
                    None => s += cfg.dist.sample(u),
                    Some(q) => {
                        let x = q.draw(u);
                        s += x;
                        log_w += q.log_ratio(x);
                    }
                }
            }
            if s >= level {
                let w = log_w.exp();
                acc.hits += 1;
                acc.sum += w;
                acc.sum_sq += w * w;
            }
        }
        Ok(acc)
    })?;
    let acc = parts.iter().fold(Acc::default(), |a, p| Acc {
        hits: a.hits + p.hits,
        sum: a.sum + p.sum,
        sum_sq: a.sum_sq + p.sum_sq,
    });
    let n = cfg.samples as f64;
    let (p_hat, ci_lo, ci_hi) = match tilt {
        None => {
            let (lo, hi) = wilson(acc.hits, cfg.samples as u64, CONFIDENCE);
            (acc.hits as f64 / n, lo, hi)
        }
        Some(_) => {
            let p = acc.sum / n;
            let var = if cfg.samples > 1 { (acc.sum_sq / n - p * p).max(0.0) * n / (n - 1.0) } else { f64::NAN };
            let half = z_two_sided(CONFIDENCE) * (var / n).sqrt();
            (p, (p - half).max(0.0), (p + half).min(1.0))
        }
    };
    let r = cfg.dist.tail_exponent();
    Ok(TailRow {
        l,
        t,
        samples: cfg.samples,
        exceedances: acc.hits,
        p_hat,
        ci_lo,
        ci_hi,
        half_width: 0.5 * (ci_hi - ci_lo),
        neg_log_p: (p_hat > 0.0).then(|| -p_hat.ln()),
        ref_exponent: t.powf(r) * l as f64,
        method: if tilt.is_some() { TailMethod::Importance } else { TailMethod::Plain },
    })
}

pub(super) fn run_iid(
    cfg: &ExperimentConfig,
    l_list: &[u64],
    t_list: &[f64],
    method: TailMethod,
) -> Result<TailReport> {
    let mut rows = Vec::with_capacity(l_list.len() * t_list.len());
    for &l in l_list {
        for &t in t_list {
            rows.push(cell(cfg, l, t, method)?);
        }
    }
    let (x, y): (Vec<f64>, Vec<f64>) = rows.iter().filter_map(|r| r.neg_log_p.map(|y| (r.ref_exponent, y))).unzip();
    Ok(TailReport { r: cfg.dist.tail_exponent(), rows, fit: ols(&x, &y) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictedRow {
    #[serde(rename = "L")]
    pub l: u64,
    pub k1: i64,
    #[serde(rename = "M2")]
    pub m2: f64,
    pub samples: usize,
    pub exceedances: u64,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub half_width: f64,
    /// Mean box-restricted passage time over the replicas.
    pub mean_time: f64,
    /// `g(r, d, L, k1)`, absent outside its range of definition.
    pub g: Option<f64>,
    /// `-log(p_hat) / g`, the `M1` that puts the estimate on the reference curve.
    pub m1_fit: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictedTailReport {
    pub rows: Vec<RestrictedRow>,
}

/// Exceedance of `t_{[0,k1]^d}(0, k1 (1,...,1)) > M2 L`. All `M2` share the
/// same replicas.
pub(super) fn run_restricted(
    cfg: &ExperimentConfig,
    l_list: &[u64],
    k1: Option<i64>,
    m2_list: &[f64],
) -> Result<RestrictedTailReport> {
    let mut rows = Vec::new();
    let r = cfg.dist.tail_exponent();
    for &l in l_list {
        let k = k1.unwrap_or(l as i64);
        let side = (k + 1) as f64;
        if side.powi(cfg.d as i32) > MAX_SEARCH_VERTICES as f64 {
            return Err(Error::ResourceCap(format!(
                "the box [0,{k}]^{} has {} vertices, the cap is {MAX_SEARCH_VERTICES}",
                cfg.d,
                side.powi(cfg.d as i32)
            )));
        }
        let region = Region::boxed(Point::origin(cfg.d), Point::from_slice(&vec![k; cfg.d]))?;
        let far = Point::from_slice(&vec![k; cfg.d]);
        let times = par_map((0..cfg.samples).collect(), |i| {
            let weights = WeightConfig::new(cfg.dist, derive_seed(cfg.master_seed, &[l, k as u64, i as u64]))?;
            Ok(passage_time(&weights, Point::origin(cfg.d), far, &region)?.time)
        })?;
        let mean_time = mean(&times).unwrap_or(f64::NAN);
        let g = order::g(r, cfg.d, l as f64, k as f64).ok();
        for &m2 in m2_list {
            let hits = times.iter().filter(|&&t| t > m2 * l as f64).count() as u64;
            let (ci_lo, ci_hi) = wilson(hits, cfg.samples as u64, CONFIDENCE);
            let p_hat = hits as f64 / cfg.samples as f64;
            rows.push(RestrictedRow {
                l,
                k1: k,
                m2,
                samples: cfg.samples,
                exceedances: hits,
                p_hat,
                ci_lo,
                ci_hi,
                half_width: 0.5 * (ci_hi - ci_lo),
                mean_time,
                g,
                m1_fit: g.filter(|_| p_hat > 0.0).map(|g| -p_hat.ln() / g),
            });
        }
    }
    Ok(RestrictedTailReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tilt_ratio_matches_densities() {
        // Weibull density r/a (x/a)^{r-1} exp(-(x/a)^r)
        let dens = |r: f64, a: f64, x: f64| r / a * (x / a).powf(r - 1.0) * (-(x / a).powf(r)).exp();
        let q = Tilt::new(&DistributionSpec::WeibullTail { r: 2.0, scale: 1.0 }, 3.0).unwrap();
        for x in [0.3, 1.0, 2.5, 4.0] {
            let want = (dens(2.0, 1.0, x) / dens(2.0, q.b, x)).ln();
            assert!((q.log_ratio(x) - want).abs() < 1e-12);
        }
        assert!(Tilt::new(&DistributionSpec::Uniform { lo: 0.0, hi: 1.0 }, 0.9).is_none());
    }
}
