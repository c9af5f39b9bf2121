//! Brute-force references shared by the integration tests. Nothing here goes
//! through the crate's search code: paths are enumerated by plain recursion
//! over lattice coordinates.

#![allow(dead_code)]

use fpp_core::lattice::{EdgeId, Point};

/// Vertices of the box `[0, w-1] x [0, h-1]`.
pub fn grid(w: i64, h: i64) -> Vec<Point> {
    let mut out = Vec::new();
    for x in 0..w {
        for y in 0..h {
            out.push(Point::from_slice(&[x, y]));
        }
    }
    out
}

fn inside(p: &Point, lo: &[i64], hi: &[i64]) -> bool {
    p.coords().iter().zip(lo.iter().zip(hi)).all(|(c, (l, h))| l <= c && c <= h)
}

/// Calls `visit(path_edges)` for every self-avoiding path from `v` to `w`
/// inside the box `[lo, hi]`.
pub fn for_each_sap(v: &Point, w: &Point, lo: &[i64], hi: &[i64], mut visit: impl FnMut(&[EdgeId])) {
    fn rec(
        at: &Point,
        w: &Point,
        lo: &[i64],
        hi: &[i64],
        seen: &mut Vec<Point>,
        edges: &mut Vec<EdgeId>,
        visit: &mut dyn FnMut(&[EdgeId]),
    ) {
        if at == w {
            visit(edges);
            return;
        }
        for axis in 0..at.dim() {
            for delta in [-1, 1] {
                let next = at.step(axis, delta);
                if !inside(&next, lo, hi) || seen.contains(&next) {
                    continue;
                }
                seen.push(next);
                edges.push(EdgeId::new(*at, next).unwrap());
                rec(&next, w, lo, hi, seen, edges, visit);
                edges.pop();
                seen.pop();
            }
        }
    }
    let mut seen = vec![*v];
    rec(v, w, lo, hi, &mut seen, &mut Vec::new(), &mut visit);
}

/// Minimum passage time over self-avoiding paths, `+inf` if none.
pub fn sap_min(weight: impl Fn(&EdgeId) -> f64, v: &Point, w: &Point, lo: &[i64], hi: &[i64]) -> f64 {
    let mut best = f64::INFINITY;
    for_each_sap(v, w, lo, hi, |p| {
        let t: f64 = p.iter().map(&weight).sum();
        best = best.min(t);
    });
    best
}

/// `(time, min over geodesics of M, max over geodesics of M)` by
/// enumeration, with ties decided exactly. Meant for integer weights.
pub fn geodesic_extremes(
    weight: impl Fn(&EdgeId) -> f64,
    v: &Point,
    w: &Point,
    lo: &[i64],
    hi: &[i64],
) -> (f64, f64, f64) {
    let mut paths: Vec<(f64, f64)> = Vec::new();
    for_each_sap(v, w, lo, hi, |p| {
        let t: f64 = p.iter().map(&weight).sum();
        let m = p.iter().map(&weight).fold(0.0, f64::max);
        paths.push((t, m));
    });
    let t = paths.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let geo = paths.iter().filter(|p| p.0 == t);
    let lo_m = geo.clone().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hi_m = geo.map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    (t, lo_m, hi_m)
}

/// Small deterministic generator for picking instances.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}
