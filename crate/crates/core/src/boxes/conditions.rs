use serde::{Deserialize, Serialize};

use super::black::{certified_linear_bound, LowerBound};
use super::skeleton::{Skeleton, SkeletonVariant};
use crate::error::{Error, Result};
use crate::lattice::{EdgeId, Point};
use crate::order;
use crate::weights::WeightConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AVariant {
    A1,
    A2,
    A3,
    A3Tilde,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AParams {
    pub c: f64,
    pub gamma: f64,
    pub m: f64,
    pub big_n: u64,
    /// Tail exponent in `f_{d,r}` (A1, A2) and in the `(log N)^{1/(2dr)}` band (A2).
    pub r: f64,
    /// Slope margin of the path bound in the tilde variant.
    pub delta7: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AClause {
    /// Heavy crossing edges must lie in `[lo, hi]`.
    CrossingBand,
    /// Remaining skeleton edges must be nearly minimal.
    SkeletonLight,
    /// Edges near the skeleton must be expensive.
    InteriorLower,
    /// Edges leaving the boundary inwards must be expensive.
    BoundaryLower,
    /// Paths avoiding the skeleton edges must cost `(F^- + delta7)` per step.
    AvoidingPath,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AViolation {
    pub clause: AClause,
    /// `None` for the path clause.
    pub edge: Option<EdgeId>,
    pub weight: f64,
    pub bound: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AReport {
    pub satisfied: bool,
    pub violation: Option<AViolation>,
    pub certified: bool,
}

impl AReport {
    fn ok() -> Self {
        AReport { satisfied: true, violation: None, certified: true }
    }

    fn violated(clause: AClause, edge: Option<EdgeId>, weight: f64, bound: f64) -> Self {
        AReport { satisfied: false, violation: Some(AViolation { clause, edge, weight, bound }), certified: true }
    }
}

/// Every edge with at least one endpoint in the box, each once, in a
/// deterministic order.
fn edges_touching(skel: &Skeleton) -> Vec<EdgeId> {
    let b = skel.b_box();
    let mut out = Vec::new();
    for p in b.iter() {
        for i in 0..p.dim() {
            out.push(EdgeId::along(p, i));
            if !b.contains(&p.step(i, -1)) {
                out.push(EdgeId::along(p.step(i, -1), i));
            }
        }
    }
    out
}

/// Evaluates the chosen condition and reports the first violated clause
/// (clauses in the order listed in [`AClause`], edges in box order).
pub fn check_a_condition(cfg: &WeightConfig, skel: &Skeleton, variant: AVariant, params: &AParams) -> Result<AReport> {
    let want = if variant == AVariant::A1 { SkeletonVariant::V1 } else { SkeletonVariant::V2 };
    if skel.variant() != want {
        return Err(Error::Precondition(format!("{variant:?} needs the {want:?} skeleton")));
    }
    if !(params.c > 0.0) || !(params.gamma >= 1.0) {
        return Err(Error::InvalidParameter("A-conditions need c > 0 and gamma >= 1".into()));
    }
    let d = skel.frame().dim();
    let df = d as f64;
    let f_minus = cfg.dist().f_minus();
    let log_n = (params.big_n as f64).ln();
    let c2 = params.c * params.c;

    if variant == AVariant::A3Tilde {
        let b = skel.b_box();
        let interior: Vec<Point> = b.iter().filter(|p| !b.is_on_boundary(p)).collect();
        let min_sep = log_n.powf(1.0 / (8.0 * df * df)).ceil() as i64;
        let weight = |e: &EdgeId| if skel.is_c_edge(e) { f64::INFINITY } else { cfg.weight(e) };
        let slope = f_minus + params.delta7;
        let member = |p: &Point| skel.is_interior(p);
        return Ok(match certified_linear_bound(weight, b, &interior, member, min_sep, slope)? {
            LowerBound::Holds => AReport::ok(),
            LowerBound::Violated => AReport::violated(AClause::AvoidingPath, None, f64::NAN, slope),
            LowerBound::Uncertain => {
                AReport { certified: false, ..AReport::violated(AClause::AvoidingPath, None, f64::NAN, slope) }
            }
        });
    }

    let (scale, light) = match variant {
        AVariant::A1 => (params.c * order::f(d, params.r, params.big_n)?, f_minus + params.c),
        AVariant::A2 => (c2 * order::f(d, params.r, params.big_n)?, f_minus + c2),
        _ => (c2 * order::f(d, df - 1.0, params.big_n)?, f_minus + c2),
    };
    for e in skel.e_tilde() {
        let w = cfg.weight(e);
        if w < scale || w > params.gamma * scale {
            let bound = if w < scale { scale } else { params.gamma * scale };
            return Ok(AReport::violated(AClause::CrossingBand, Some(*e), w, bound));
        }
    }
    for e in skel.c_edges() {
        if skel.is_e_tilde(e) {
            continue;
        }
        let w = cfg.weight(e);
        if w > light {
            return Ok(AReport::violated(AClause::SkeletonLight, Some(*e), w, light));
        }
    }
    if variant == AVariant::A1 {
        return Ok(AReport::ok());
    }

    let field = skel.distance_field()?;
    let m2 = params.m * params.m;
    let b = skel.b_box();
    let in_f = |p: &Point| {
        let radius = log_n.powf(1.0 / (8.0 * df * df));
        skel.is_interior(p) && !skel.in_c(p) && (field.vertex(p).1 as f64) <= radius
    };
    let edges = edges_touching(skel);
    for e in &edges {
        let [x, y] = e.endpoints();
        let bound = match variant {
            AVariant::A2 => {
                if skel.is_interior(&x) && skel.is_interior(&y) && !skel.is_c_edge(e) {
                    let ell = field.edge(e).ell as f64;
                    Some((params.c * order::f(d, params.r, params.big_n)? / (ell + 1.0)).max(m2))
                } else {
                    None
                }
            }
            _ => {
                if (in_f(&x) || in_f(&y)) && !b.is_on_boundary(&x) && !b.is_on_boundary(&y) {
                    let dist = field.edge(e);
                    let f = order::f(d, df - 1.0, params.big_n)?;
                    let denom = (dist.ell1 as f64 + 1.0) * (dist.ell2 as f64 + 2.0).ln();
                    Some((params.c * f / denom).max(m2))
                } else {
                    None
                }
            }
        };
        if let Some(bound) = bound {
            let w = cfg.weight(e);
            if w < bound {
                return Ok(AReport::violated(AClause::InteriorLower, Some(*e), w, bound));
            }
        }
    }
    for e in &edges {
        let [x, y] = e.endpoints();
        let (on_x, on_y) = (b.is_on_boundary(&x), b.is_on_boundary(&y));
        let applies = match variant {
            AVariant::A2 => (on_x || on_y) && (skel.is_interior(&x) || skel.is_interior(&y)) && !skel.is_c_edge(e),
            _ => (on_x || on_y) && !(on_x && on_y) && !skel.is_c_edge(e),
        };
        if applies {
            let bound = match variant {
                AVariant::A2 => log_n.powf(1.0 / (2.0 * df * params.r)),
                _ => log_n.powf(1.0 / (2.0 * df * df)),
            };
            let w = cfg.weight(e);
            if w < bound {
                return Ok(AReport::violated(AClause::BoundaryLower, Some(*e), w, bound));
            }
        }
    }
    Ok(AReport::ok())
}

/// The flipped configuration `tau*`: fresh weights on the skeleton and
/// crossing edges (v1) or on every edge meeting the box interior (v2).
pub fn tau_star(cfg: &WeightConfig, skel: &Skeleton, sub_seed: u64) -> WeightConfig {
    let edges: Vec<EdgeId> = match skel.variant() {
        SkeletonVariant::V1 => skel.c_edges().iter().chain(skel.e_tilde()).copied().collect(),
        SkeletonVariant::V2 => {
            let mut out = Vec::new();
            for p in skel.b_box().iter().filter(|p| skel.is_interior(p)) {
                for i in 0..p.dim() {
                    out.push(EdgeId::along(p, i));
                    out.push(EdgeId::along(p.step(i, -1), i));
                }
            }
            out
        }
    };
    cfg.resample_region(edges, sub_seed)
}
