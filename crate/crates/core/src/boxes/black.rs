use serde::{Deserialize, Serialize};

use super::skeleton::{Skeleton, SkeletonVariant};
use crate::error::{Error, Result};
use crate::lattice::{BoxRegion, EdgeId, Point, Region};
use crate::passage::{backtrack, Search};
use crate::weights::{DistributionSpec, WeightConfig};

/// Window enlargements tried before a lower bound is declared uncertain.
const WINDOW_DOUBLINGS: u32 = 4;

/// `0.05 (E tau - F^-)`.
pub fn default_delta7(dist: &DistributionSpec) -> f64 {
    0.05 * (dist.mean() - dist.f_minus())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlackParams {
    pub delta7: f64,
    pub m: f64,
    pub big_n: u64,
    /// Tail exponent for the `(log N)^{1/(8dr)}` scale of the v2 clauses.
    pub r: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlackClause {
    LinearLowerBound,
    BoundaryConnector,
    BoundaryWeight,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlackReport {
    pub black: bool,
    pub failed: Option<BlackClause>,
    /// False when the unrestricted lower bound could not be certified inside
    /// the largest search window; the box is then reported as not black.
    pub certified: bool,
}

/// Outcome of a certified check of `t(v, w) >= slope |v - w|_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBound {
    Holds,
    Violated,
    Uncertain,
}

/// Checks `t(v, w) >= slope |v - w|_1` for all `v, w` in `points` with
/// `|v - w|_1 >= min_sep`, where `t` is the unrestricted passage time under
/// `weight` (infinite weights remove edges) and `w` ranges over `member`
/// points of `hull`.
///
/// Each search runs in a cube around `v`. A settled label `L` is the
/// restricted time; any path that leaves the cube costs at least the first
/// label that reached the cube's inner boundary, so
/// `t >= min(L, first_boundary_label)` and `t = L` when `L` is below it. The
/// cube doubles when neither bound decides.
pub(crate) fn certified_linear_bound<W: Fn(&EdgeId) -> f64>(
    weight: W,
    hull: &BoxRegion,
    points: &[Point],
    member: impl Fn(&Point) -> bool,
    min_sep: i64,
    slope: f64,
) -> Result<LowerBound> {
    let mut uncertain = false;
    for v in points {
        let reach =
            (0..hull.dim()).map(|i| (v.get(i) - hull.lo().get(i)).max(hull.hi().get(i) - v.get(i))).sum::<i64>();
        if reach < min_sep {
            continue;
        }
        let budget = slope * reach as f64;
        let mut radius = min_sep.max(4);
        let mut decided = false;
        for _ in 0..=WINDOW_DOUBLINGS {
            let window = Region::Box(BoxRegion::centered(*v, radius)?);
            let mut s = Search::new(&window, &weight)?;
            s.add_source(v)?;
            let mut violated = false;
            let mut unsure = false;
            while let Some(label) = s.peek() {
                if label >= budget {
                    break;
                }
                let (i, label) = s.settle_next().expect("peeked");
                let u = window.point_at(i as usize);
                let sep = v.dist1(&u);
                if sep < min_sep || !hull.contains(&u) || !member(&u) {
                    continue;
                }
                let need = slope * sep as f64;
                if label < need {
                    let fbl = s.first_boundary_label();
                    if label <= fbl {
                        violated = true;
                        break;
                    }
                    if fbl < need {
                        unsure = true;
                    }
                }
            }
            if violated {
                return Ok(LowerBound::Violated);
            }
            // unsettled members have a window time >= budget; leaving costs at least fbl
            if !unsure && s.first_boundary_label() >= budget {
                decided = true;
                break;
            }
            radius = radius.saturating_mul(2);
        }
        if !decided {
            uncertain = true;
        }
    }
    Ok(if uncertain { LowerBound::Uncertain } else { LowerBound::Holds })
}

fn log_scale(big_n: u64, exponent: f64) -> Result<f64> {
    if big_n < 3 {
        return Err(Error::InvalidParameter(format!("N must be >= 3, got {big_n}")));
    }
    Ok((big_n as f64).ln().powf(exponent))
}

/// A boundary connector: a path on `∂B` from `from` to a skeleton point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Connector {
    pub from: Point,
    pub to: Point,
    pub cost: f64,
    pub path: Vec<Point>,
}

/// For each `v in ∂B` (sorted), the cheapest connector along `∂B` to a point
/// of `C ∩ ∂B` within 1-distance `2 d n1` and cost `<= budget`, if any.
pub fn boundary_connectors(cfg: &WeightConfig, skel: &Skeleton, budget: f64) -> Result<Vec<Option<Connector>>> {
    let b = skel.b_box();
    let boundary: Vec<Point> = b.iter().filter(|p| b.is_on_boundary(p)).collect();
    let region = Region::set(b.dim(), boundary.iter().copied())?;
    let reach = 2 * b.dim() as i64 * skel.n1();
    let mut out = Vec::with_capacity(boundary.len());
    for v in &boundary {
        let mut s = Search::new(&region, |e: &EdgeId| cfg.weight(e))?;
        s.add_source(v)?;
        let mut found = None;
        while let Some(label) = s.peek() {
            if label > budget {
                break;
            }
            let (i, label) = s.settle_next().expect("peeked");
            let u = region.point_at(i as usize);
            if skel.in_c(&u) && v.dist1(&u) <= reach {
                found = Some(Connector { from: *v, to: u, cost: label, path: backtrack(&s, i) });
                break;
            }
        }
        out.push(found);
    }
    Ok(out)
}

/// `(Black-1)`: `t(v, w) >= (F^- + delta7) |v - w|_1` whenever `|v - w|_1 >= n`.
pub fn black_linear_bound(cfg: &WeightConfig, skel: &Skeleton, delta7: f64) -> Result<LowerBound> {
    let b = skel.b_box();
    let points: Vec<Point> = b.iter().collect();
    let slope = cfg.dist().f_minus() + delta7;
    certified_linear_bound(|e: &EdgeId| cfg.weight(e), b, &points, |p| b.contains(p), skel.frame().n, slope)
}

/// Blackness of the box carrying `skel`; the skeleton variant selects the
/// definition. Clauses are checked cheapest first and the first failure is
/// reported.
pub fn is_black(cfg: &WeightConfig, skel: &Skeleton, params: &BlackParams) -> Result<BlackReport> {
    if !(params.delta7 >= 0.0) || !(params.m > 0.0) {
        return Err(Error::InvalidParameter("blackness needs delta7 >= 0 and M > 0".into()));
    }
    let fail = |c| Ok(BlackReport { black: false, failed: Some(c), certified: true });
    let b = skel.b_box();
    match skel.variant() {
        SkeletonVariant::V1 => {
            let budget = params.m * skel.n1() as f64;
            if boundary_connectors(cfg, skel, budget)?.iter().any(Option::is_none) {
                return fail(BlackClause::BoundaryConnector);
            }
        }
        SkeletonVariant::V2 => {
            let d = b.dim() as f64;
            let scale = log_scale(params.big_n, 1.0 / (8.0 * d * params.r))?;
            for p in b.iter().filter(|p| b.is_on_boundary(p)) {
                for i in 0..p.dim() {
                    let q = p.step(i, 1);
                    if b.is_on_boundary(&q) && cfg.weight(&EdgeId::along(p, i)) > scale {
                        return fail(BlackClause::BoundaryWeight);
                    }
                }
            }
            if !boundary_pairs_within(cfg, b, params.m, scale)? {
                return fail(BlackClause::BoundaryConnector);
            }
        }
    }
    match black_linear_bound(cfg, skel, params.delta7)? {
        LowerBound::Holds => Ok(BlackReport { black: true, failed: None, certified: true }),
        LowerBound::Violated => fail(BlackClause::LinearLowerBound),
        LowerBound::Uncertain => {
            Ok(BlackReport { black: false, failed: Some(BlackClause::LinearLowerBound), certified: false })
        }
    }
}

/// v2 `(Black-2)`: `t_{∂B}(v, w) <= M max(|v - w|_1, scale)` for all boundary pairs.
fn boundary_pairs_within(cfg: &WeightConfig, b: &BoxRegion, m: f64, scale: f64) -> Result<bool> {
    let boundary: Vec<Point> = b.iter().filter(|p| b.is_on_boundary(p)).collect();
    let region = Region::set(b.dim(), boundary.iter().copied())?;
    for v in &boundary {
        let far = boundary.iter().map(|w| v.dist1(w)).max().unwrap_or(0) as f64;
        let mut s = Search::new(&region, |e: &EdgeId| cfg.weight(e))?;
        s.add_source(v)?;
        s.run_through(m * far.max(scale));
        for w in &boundary {
            let idx = region.index_of(w).expect("boundary point") as u32;
            if !s.is_settled(idx) || s.dist(idx) > m * (v.dist1(w) as f64).max(scale) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::frame::BoxFrame;
    use crate::boxes::skeleton::build_skeleton;

    fn skel(n: i64, n1: i64, variant: SkeletonVariant) -> Skeleton {
        let f = BoxFrame::new(Point::origin(2), n, 1).unwrap();
        build_skeleton(&f, n1, variant).unwrap()
    }

    fn params(delta7: f64) -> BlackParams {
        BlackParams { delta7, m: 4.0, big_n: 10_000, r: 1.0 }
    }

    #[test]
    fn constant_weights_fail_the_linear_bound() {
        let cfg = WeightConfig::new(DistributionSpec::Constant { v: 1.0 }, 3).unwrap();
        let s = skel(6, 2, SkeletonVariant::V1);
        let r = is_black(&cfg, &s, &params(0.1)).unwrap();
        assert!(!r.black);
        assert_eq!(r.failed, Some(BlackClause::LinearLowerBound));
        assert!(r.certified);
        // with delta7 = 0 the bound is tight and holds
        assert_eq!(black_linear_bound(&cfg, &s, 0.0).unwrap(), LowerBound::Holds);
    }

    #[test]
    fn cheap_boundary_heavy_interior_is_black() {
        let s = skel(6, 2, SkeletonVariant::V1);
        let b = s.b_box().clone();
        let base = WeightConfig::new(DistributionSpec::Uniform { lo: 1.0, hi: 2.0 }, 5).unwrap();
        let mut over = Vec::new();
        for p in b.expand(20).unwrap().iter() {
            for i in 0..2 {
                let e = EdgeId::along(p, i);
                let on_bd = b.is_on_boundary(&p) && b.is_on_boundary(&p.step(i, 1));
                over.push((e, if on_bd { 2.0 } else { 10.0 }));
            }
        }
        let cfg = base.with_overrides(over).unwrap();
        let r = is_black(&cfg, &s, &params(0.5)).unwrap();
        assert!(r.black, "{r:?}");
        // re-verify every connector
        for c in boundary_connectors(&cfg, &s, 4.0 * 2.0).unwrap() {
            let c = c.expect("connector exists");
            assert!(s.in_c(&c.to) && s.is_on_boundary(&c.to));
            assert!(c.from.dist1(&c.to) <= 2 * 2 * 2);
            assert_eq!(c.path.first(), Some(&c.from));
            assert_eq!(c.path.last(), Some(&c.to));
            let cost: f64 = c.path.windows(2).map(|w| cfg.weight(&EdgeId::new(w[0], w[1]).unwrap())).sum();
            assert!(c.path.iter().all(|p| s.is_on_boundary(p)));
            assert!((cost - c.cost).abs() < 1e-12 && cost <= 8.0);
        }
    }

    #[test]
    fn heavy_boundary_fails_connectors() {
        let base = WeightConfig::new(DistributionSpec::Constant { v: 100.0 }, 1).unwrap();
        let s = skel(6, 2, SkeletonVariant::V1);
        let r = is_black(&base, &s, &params(0.0)).unwrap();
        assert_eq!(r.failed, Some(BlackClause::BoundaryConnector));
        let s2 = skel(8, 2, SkeletonVariant::V2);
        let r2 = is_black(&base, &s2, &params(0.0)).unwrap();
        assert_eq!(r2.failed, Some(BlackClause::BoundaryWeight));
    }

    #[test]
    fn certified_bound_matches_brute_force() {
        // oracle: restricted times in a generous window are the unrestricted ones
        let cfg = WeightConfig::new(DistributionSpec::Exponential { rate: 1.0 }, 9).unwrap();
        let hull = BoxRegion::new(Point::from_slice(&[0, 0]), Point::from_slice(&[4, 4])).unwrap();
        let pts: Vec<Point> = hull.iter().collect();
        let big = Region::Box(hull.expand(40).unwrap());
        for slope in [0.05, 0.2, 0.4, 0.8] {
            let mut brute = true;
            for v in &pts {
                let mut s = Search::new(&big, |e: &EdgeId| cfg.weight(e)).unwrap();
                s.add_source(v).unwrap();
                s.run_all();
                for w in &pts {
                    if v.dist1(w) >= 3 && s.dist(big.index_of(w).unwrap() as u32) < slope * v.dist1(w) as f64 {
                        brute = false;
                    }
                }
            }
            let got = certified_linear_bound(|e: &EdgeId| cfg.weight(e), &hull, &pts, |p| hull.contains(p), 3, slope)
                .unwrap();
            assert_eq!(got == LowerBound::Holds, brute, "slope {slope}");
            assert_ne!(got, LowerBound::Uncertain);
        }
    }
}
