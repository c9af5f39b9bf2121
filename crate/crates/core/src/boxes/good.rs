use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{BoxRegion, EdgeId, Point, Shell};
use crate::order;
use crate::passage::{restricted_geodesic_by, Search};
use crate::weights::WeightConfig;

/// Which goodness definition to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoodVariant {
    /// Exponential or lighter-than-exponential tails up to `r = 1`:
    /// `k <= f`, threshold `2 M f`.
    Subexp,
    /// Only a second moment: `k <= M f_{d,0}`, threshold `4 d^2 M^2 f_{d,0}`.
    Moment,
    /// `r > 1`: `k <= f`, threshold `2 d M f`.
    Superexp,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodParams {
    pub m: f64,
    pub big_n: u64,
    /// Tail exponent used in `f_{d,r}`; ignored by [`GoodVariant::Moment`].
    pub r: f64,
    pub variant: GoodVariant,
}

impl GoodParams {
    /// `(threshold, k_max)` in dimension `d`.
    pub fn bounds(&self, d: usize) -> Result<(f64, i64)> {
        if !(self.m > 0.0) {
            return Err(Error::InvalidParameter(format!("M must be positive, got {}", self.m)));
        }
        let df = d as f64;
        Ok(match self.variant {
            GoodVariant::Subexp => {
                let f = order::f(d, self.r, self.big_n)?;
                (2.0 * self.m * f, f.floor() as i64)
            }
            GoodVariant::Moment => {
                let f = order::f(d, 0.0, self.big_n)?;
                (4.0 * df * df * self.m * self.m * f, (self.m * f).floor() as i64)
            }
            GoodVariant::Superexp => {
                let f = order::f(d, self.r, self.big_n)?;
                (2.0 * df * self.m * f, f.floor() as i64)
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodEdge {
    pub good: bool,
    /// Smallest admissible radius whose shell satisfies the bound.
    pub witness: Option<i64>,
    pub threshold: f64,
    pub k_max: i64,
}

/// True when every pair of shell vertices is joined inside the shell at cost
/// `<= threshold`.
pub fn shell_within(cfg: &WeightConfig, shell: &Shell, threshold: f64) -> Result<bool> {
    let region = shell.region();
    let total = shell.vertices().len() as u32;
    for v in shell.vertices() {
        let mut s = Search::new(&region, |e: &EdgeId| cfg.weight(e))?;
        s.add_source(v)?;
        s.run_through(threshold);
        if s.settled_count() < total {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Goodness of `e`. When `domain` is given every shell that may be examined
/// must lie inside it.
pub fn is_good_edge(
    cfg: &WeightConfig,
    e: &EdgeId,
    params: &GoodParams,
    domain: Option<&BoxRegion>,
) -> Result<GoodEdge> {
    let (threshold, k_max) = params.bounds(e.dim())?;
    if let Some(dom) = domain {
        if k_max >= 1 {
            let reach = BoxRegion::centered(e.v_e(), k_max)?;
            if !dom.contains_box(&reach) {
                return Err(Error::DomainTooSmall(format!("shells up to radius {k_max} around {e} leave the domain")));
            }
        }
    }
    for k in 1..=k_max {
        if shell_within(cfg, &Shell::new(*e, k)?, threshold)? {
            return Ok(GoodEdge { good: true, witness: Some(k), threshold, k_max });
        }
    }
    Ok(GoodEdge { good: false, witness: None, threshold, k_max })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Detour {
    pub path: Vec<Point>,
    pub original_time: f64,
    pub time: f64,
}

fn path_time(cfg: &WeightConfig, path: &[Point]) -> Result<f64> {
    path.windows(2).map(|w| EdgeId::new(w[0], w[1]).map(|e| cfg.weight(&e))).sum()
}

/// Replaces the part of `path` between its first and last visit to the shell
/// `C_k` around `e_heavy` by a cheapest path inside the shell.
///
/// Refuses unless `tau(e_heavy)` exceeds the variant threshold, the path
/// uses `e_heavy`, reaches the shell before the heavy edge and again after
/// it, and the two shell visits are joined inside the shell within the
/// threshold. Under those conditions the result is strictly cheaper.
pub fn detour_rewrite(
    cfg: &WeightConfig,
    path: &[Point],
    e_heavy: &EdgeId,
    k: i64,
    params: &GoodParams,
) -> Result<Detour> {
    let (threshold, _) = params.bounds(e_heavy.dim())?;
    let heavy = cfg.weight(e_heavy);
    if !(heavy > threshold) {
        return Err(Error::Precondition(format!(
            "edge weight {heavy} does not exceed the detour threshold {threshold}"
        )));
    }
    let original_time = path_time(cfg, path)?;
    let t = path
        .windows(2)
        .position(|w| EdgeId::new(w[0], w[1]).map(|x| x == *e_heavy).unwrap_or(false))
        .ok_or_else(|| Error::Precondition(format!("{e_heavy} is not on the path")))?;
    let shell = Shell::new(*e_heavy, k)?;
    let first = path.iter().position(|p| shell.contains(p));
    let last = path.iter().rposition(|p| shell.contains(p));
    let (m, l) = match (first, last) {
        (Some(m), Some(l)) if m <= t && l > t => (m, l),
        _ => {
            return Err(Error::Precondition(format!(
                "the path does not cross the shell of radius {k} around {e_heavy} on both sides"
            )))
        }
    };
    let (cost, inner) = restricted_geodesic_by(|e: &EdgeId| cfg.weight(e), path[m], path[l], &shell.region())?
        .ok_or_else(|| Error::Precondition("the shell does not connect the crossing points".into()))?;
    if cost > threshold {
        return Err(Error::Precondition(format!(
            "shell radius {k} is not good: crossing points are {cost} apart inside it"
        )));
    }
    let mut out = path[..m].to_vec();
    out.extend(inner);
    out.extend_from_slice(&path[l + 1..]);
    let time = path_time(cfg, &out)?;
    Ok(Detour { path: out, original_time, time })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::DistributionSpec;

    fn params() -> GoodParams {
        GoodParams { m: 1.0, big_n: 10_000, r: 1.0, variant: GoodVariant::Subexp }
    }

    fn edge() -> EdgeId {
        EdgeId::along(Point::origin(2), 0)
    }

    #[test]
    fn zero_weights_are_good_at_one() {
        let cfg = WeightConfig::new(DistributionSpec::Constant { v: 0.0 }, 1).unwrap();
        let g = is_good_edge(&cfg, &edge(), &params(), None).unwrap();
        assert!(g.good);
        assert_eq!(g.witness, Some(1));
    }

    #[test]
    fn expensive_shells_are_not_good() {
        let base = WeightConfig::new(DistributionSpec::Exponential { rate: 1.0 }, 1).unwrap();
        let (threshold, k_max) = params().bounds(2).unwrap();
        let heavy: Vec<(EdgeId, f64)> = (1..=k_max)
            .flat_map(|k| Shell::new(edge(), k).unwrap().edges().to_vec())
            .map(|e| (e, 10.0 * threshold))
            .collect();
        let cfg = base.with_overrides(heavy).unwrap();
        let g = is_good_edge(&cfg, &edge(), &params(), None).unwrap();
        assert!(!g.good);
        assert_eq!(g.witness, None);
    }

    #[test]
    fn domain_must_hold_the_shells() {
        let cfg = WeightConfig::new(DistributionSpec::Constant { v: 0.0 }, 1).unwrap();
        let small = BoxRegion::centered(Point::origin(2), 1).unwrap();
        assert!(matches!(is_good_edge(&cfg, &edge(), &params(), Some(&small)), Err(Error::DomainTooSmall(_))));
        let big = BoxRegion::centered(Point::origin(2), 10).unwrap();
        assert!(is_good_edge(&cfg, &edge(), &params(), Some(&big)).unwrap().good);
    }

    fn straight(n: i64) -> Vec<Point> {
        (-n..=n).map(|x| Point::from_slice(&[x, 0])).collect()
    }

    #[test]
    fn detour_removes_heavy_edge() {
        let base = WeightConfig::new(DistributionSpec::Constant { v: 1.0 }, 1).unwrap();
        let cfg = base.with_overrides([(edge(), 100.0)]).unwrap();
        let path = straight(4);
        let d = detour_rewrite(&cfg, &path, &edge(), 1, &params()).unwrap();
        assert_eq!(d.original_time, 107.0);
        assert!(d.time < d.original_time);
        assert_eq!(d.path.first(), path.first());
        assert_eq!(d.path.last(), path.last());
        assert!(d.path.windows(2).all(|w| w[0].is_adjacent(&w[1])));
        assert!(d.time <= d.original_time - 100.0 + params().bounds(2).unwrap().0 + 1.0);
    }

    #[test]
    fn detour_refusals() {
        let cfg = WeightConfig::new(DistributionSpec::Constant { v: 1.0 }, 1).unwrap();
        // light edge
        assert!(matches!(detour_rewrite(&cfg, &straight(4), &edge(), 1, &params()), Err(Error::Precondition(_))));
        let heavy = cfg.with_overrides([(edge(), 100.0)]).unwrap();
        // starts inside the shell
        let inside = straight(4)[4..].to_vec();
        assert!(matches!(detour_rewrite(&heavy, &inside, &edge(), 2, &params()), Err(Error::Precondition(_))));
        // edge not on path
        let off: Vec<Point> = (-3..=3).map(|x| Point::from_slice(&[x, 5])).collect();
        assert!(matches!(detour_rewrite(&heavy, &off, &edge(), 1, &params()), Err(Error::Precondition(_))));
    }
}
