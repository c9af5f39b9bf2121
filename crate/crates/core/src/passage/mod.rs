//! Passage times, geodesic sets and maximal-weight statistics.

mod bidir;
mod dag;
mod radix;
mod search;

use serde::{Deserialize, Serialize};

pub use dag::{
    box_to_box_dag, enumerate_geodesics, enumerate_geodesics_by, geodesic_dag, geodesic_dag_by,
    geodesic_envelope_check, max_weight_stats, DagEdge, EnvelopeCheck, GeodesicDag, MaxWeightStats,
};
pub(crate) use search::for_each_neighbour;
pub(crate) use search::Search;
pub use search::MAX_SEARCH_VERTICES;

use crate::error::{Error, Result};
use crate::lattice::{BoxRegion, EdgeId, Point, Region};
use crate::weights::WeightConfig;

/// Relative tie tolerance for continuous weights.
pub const RELATIVE_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PassageResult {
    /// `+inf` when no path inside the region connects the terminals.
    pub time: f64,
    pub source: Point,
    pub target: Point,
    /// False certifies that every path leaving the region costs at least
    /// `time`, so the restricted time equals the unrestricted one.
    pub boundary_reached: bool,
}

/// Tie tolerance for a configuration at passage time `t`: exact comparison
/// for integer-valued weights, relative `1e-12` otherwise.
pub fn tie_tolerance(cfg: &WeightConfig, t: f64) -> f64 {
    if cfg.is_integer_valued() {
        0.0
    } else {
        RELATIVE_TIE_TOLERANCE * t.abs()
    }
}

/// Restricted first passage time `t_D(v, w)`.
pub fn passage_time(cfg: &WeightConfig, v: Point, w: Point, region: &Region) -> Result<PassageResult> {
    passage_time_by(|e: &EdgeId| cfg.weight(e), v, w, region)
}

/// [`passage_time`] with an arbitrary weight function.
pub fn passage_time_by<W: Fn(&EdgeId) -> f64>(weight: W, v: Point, w: Point, region: &Region) -> Result<PassageResult> {
    check_dims(&v, region)?;
    check_dims(&w, region)?;
    region.len().ok_or(Error::InfiniteRegion)?;
    let vi = region.index_of(&v).ok_or_else(|| Error::OutsideRegion(v.to_string()))? as u32;
    let wi = region.index_of(&w).ok_or_else(|| Error::OutsideRegion(w.to_string()))? as u32;
    let m = bidir::meet(&weight, region, &[vi], &[wi])?;
    Ok(PassageResult { time: m.time, source: v, target: w, boundary_reached: m.exit_bound < m.time })
}

/// A restricted geodesic `v -> w` as a vertex sequence together with its
/// passage time; `None` when no path inside the region connects them.
pub fn restricted_geodesic_by<W: Fn(&EdgeId) -> f64>(
    weight: W,
    v: Point,
    w: Point,
    region: &Region,
) -> Result<Option<(f64, Vec<Point>)>> {
    check_dims(&v, region)?;
    check_dims(&w, region)?;
    let mut s = Search::new(region, weight)?;
    s.add_source(&v)?;
    let t = region.index_of(&w).ok_or_else(|| Error::OutsideRegion(w.to_string()))? as u32;
    Ok(s.run_to(t).map(|time| (time, backtrack(&s, t))))
}

/// Walks predecessor links implied by the labels back to a source. A vertex
/// `u` is a predecessor of `x` when it was settled earlier and
/// `dist(u) + tau = dist(x)` holds exactly, which is how `x` got its label.
pub(crate) fn backtrack<W: Fn(&EdgeId) -> f64>(s: &Search<'_, W>, target: u32) -> Vec<Point> {
    let region = s.region();
    let mut cur = target;
    let mut path = vec![region.point_at(cur as usize)];
    loop {
        let p = region.point_at(cur as usize);
        let mut pred = None;
        for_each_neighbour(region, cur as usize, &p, |j, axis, sign| {
            let Some(j) = j else { return };
            let j = j as u32;
            if pred.is_some() || !s.is_settled(j) || s.rank(j) >= s.rank(cur) {
                return;
            }
            if s.dist(j) + s.weight(&EdgeId::from_step(p, axis, sign)) == s.dist(cur) {
                pred = Some(j);
            }
        });
        match pred {
            Some(j) => {
                cur = j;
                path.push(region.point_at(j as usize));
            }
            None => break,
        }
    }
    path.reverse();
    path
}

/// Cube centred at `v` with radius `k * max(|w - v|_inf, 1)`; for `v = 0`,
/// `w = N e_1` this is `B_{KN} = [-KN, KN]^d`.
pub fn envelope(v: &Point, w: &Point, k: i64) -> Result<BoxRegion> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("envelope margin must be >= 1, got {k}")));
    }
    let r = v.dist_inf(w).max(1).checked_mul(k).ok_or_else(|| Error::InvalidParameter("envelope overflows".into()))?;
    BoxRegion::centered(*v, r)
}

/// Unrestricted `t(v, w)` computed inside the certified envelope of margin
/// `k`. `boundary_reached == false` certifies the value.
pub fn passage_time_full(cfg: &WeightConfig, v: Point, w: Point, k: i64) -> Result<PassageResult> {
    let env = Region::Box(envelope(&v, &w, k)?);
    passage_time(cfg, v, w, &env)
}

/// `min_{v in D0, w in D1} t_env(v, w)` by multi-source search.
pub fn box_to_box(cfg: &WeightConfig, d0: &Region, d1: &Region, env: &Region) -> Result<PassageResult> {
    let (sources, targets) = check_boxes(d0, d1, env)?;
    let mut s = Search::new(env, |e: &EdgeId| cfg.weight(e))?;
    s.track_origin();
    for p in &sources {
        s.add_source(p)?;
    }
    let target_idx: std::collections::HashSet<u32> =
        targets.iter().map(|p| env.index_of(p).expect("checked") as u32).collect();
    while let Some((i, d)) = s.settle_next() {
        if target_idx.contains(&i) {
            let src = env.point_at(s.origin(i).expect("labelled vertex has an origin") as usize);
            return Ok(PassageResult {
                time: d,
                source: src,
                target: env.point_at(i as usize),
                boundary_reached: s.first_boundary_label() <= d,
            });
        }
    }
    Ok(PassageResult {
        time: f64::INFINITY,
        source: sources[0],
        target: targets[0],
        boundary_reached: s.first_boundary_label().is_finite(),
    })
}

pub(crate) fn check_dims(p: &Point, region: &Region) -> Result<()> {
    if p.dim() != region.dim() {
        return Err(Error::DimensionMismatch { expected: region.dim(), got: p.dim() });
    }
    Ok(())
}

pub(crate) fn check_boxes(d0: &Region, d1: &Region, env: &Region) -> Result<(Vec<Point>, Vec<Point>)> {
    let sources = d0.vertices()?;
    let targets = d1.vertices()?;
    if sources.is_empty() || targets.is_empty() {
        return Err(Error::InvalidParameter("terminal sets must be nonempty".into()));
    }
    for p in sources.iter().chain(&targets) {
        if !env.contains(p) {
            return Err(Error::OutsideRegion(p.to_string()));
        }
    }
    if targets.iter().any(|p| d0.contains(p)) {
        return Err(Error::Overlap);
    }
    Ok((sources, targets))
}
