use std::collections::HashSet;

use super::edge::EdgeId;
use super::point::Point;
use super::region::Region;
use crate::error::{Error, Result};

/// The k-th shell `C_k(e) = {z : |v_e - z|_inf = k}` around an edge, together
/// with the nearest-neighbour edges that have both endpoints on it.
#[derive(Clone, Debug)]
pub struct Shell {
    center_edge: EdgeId,
    k: i64,
    vertices: Vec<Point>,
    edges: Vec<EdgeId>,
}

impl Shell {
    pub fn new(e: EdgeId, k: i64) -> Result<Self> {
        if k <= 0 {
            return Err(Error::InvalidParameter(format!("shell radius must be positive, got {k}")));
        }
        let center = e.v_e();
        let vertices = shell_vertices(center, k);
        let mut edges = Vec::new();
        for z in &vertices {
            for axis in 0..center.dim() {
                let up = z.step(axis, 1);
                if up.dist_inf(&center) == k {
                    edges.push(EdgeId::along(*z, axis));
                }
            }
        }
        edges.sort_unstable();
        Ok(Shell { center_edge: e, k, vertices, edges })
    }

    pub fn center_edge(&self) -> EdgeId {
        self.center_edge
    }

    pub fn center(&self) -> Point {
        self.center_edge.v_e()
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.center_edge.dim()
    }

    /// Sorted shell vertices.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Sorted shell edges.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim() && p.dist_inf(&self.center()) == self.k
    }

    /// Strictly inside the shell (closer to the centre).
    pub fn is_inside(&self, p: &Point) -> bool {
        p.dist_inf(&self.center()) < self.k
    }

    /// `C(d) k^{d-1}` with `C(d) = 4^d d`.
    pub fn cardinality_bound(&self) -> f64 {
        let d = self.dim() as i32;
        4f64.powi(d) * d as f64 * (self.k as f64).powi(d - 1)
    }

    pub fn region(&self) -> Region {
        Region::set(self.dim(), self.vertices.iter().copied()).expect("shell vertices are valid")
    }

    pub fn edge_set(&self) -> HashSet<EdgeId> {
        self.edges.iter().copied().collect()
    }

    /// Deterministic path from `a` to `b` along the shell.
    ///
    /// First an axis of `b` that sits at distance `k` is pinned (using another
    /// extremal axis as a pivot when needed), then the remaining axes are
    /// moved into place in order. Every intermediate vertex stays on the
    /// shell and the length is at most `2k(d+1)`, well inside `4d^2(2k+1)`.
    /// Returns `None` when either point is off the shell or when `d = 1`
    /// (the two shell vertices are then not connected).
    pub fn walk(&self, a: &Point, b: &Point) -> Option<Vec<Point>> {
        if !self.contains(a) || !self.contains(b) {
            return None;
        }
        let d = self.dim();
        let c0 = self.center();
        if a == b {
            return Some(vec![*a]);
        }
        if d == 1 {
            return None;
        }
        let k = self.k;
        let rel = |p: &Point, i: usize| p.get(i) - c0.get(i);
        let mut path = vec![*a];
        let mut cur = *a;
        let go = |cur: &mut Point, path: &mut Vec<Point>, axis: usize, target_rel: i64| {
            let target = c0.get(axis) + target_rel;
            while cur.get(axis) != target {
                let s = (target - cur.get(axis)).signum();
                *cur = cur.step(axis, s);
                debug_assert_eq!(cur.dist_inf(&c0), k);
                path.push(*cur);
            }
        };
        let j = (0..d).find(|&i| rel(b, i).abs() == k).expect("b is on the shell");
        if rel(&cur, j) != rel(b, j) {
            if !(0..d).any(|i| i != j && rel(&cur, i).abs() == k) {
                // only axis j is extremal on cur; raise another axis as a pivot
                let m = if j == 0 { 1 } else { 0 };
                let sign = if rel(b, m) < 0 { -1 } else { 1 };
                go(&mut cur, &mut path, m, sign * k);
            }
            go(&mut cur, &mut path, j, rel(b, j));
        }
        for i in 0..d {
            if i != j {
                go(&mut cur, &mut path, i, rel(b, i));
            }
        }
        debug_assert_eq!(cur, *b);
        Some(path)
    }
}

/// Convenience wrapper around [`Shell::new`].
pub fn shell(e: EdgeId, k: i64) -> Result<Shell> {
    Shell::new(e, k)
}

/// Enumerates `{z : |z - c|_inf = k}` in lexicographic order without
/// visiting the interior of the cube.
fn shell_vertices(c: Point, k: i64) -> Vec<Point> {
    fn rec(c: &Point, k: i64, axis: usize, on_face: bool, cur: &mut Point, out: &mut Vec<Point>) {
        let d = c.dim();
        if axis == d {
            if on_face {
                out.push(*cur);
            }
            return;
        }
        let last = axis + 1 == d;
        let lo = c.get(axis) - k;
        let hi = c.get(axis) + k;
        if last && !on_face {
            for v in [lo, hi] {
                cur.set(axis, v);
                out.push(*cur);
            }
            return;
        }
        for v in lo..=hi {
            cur.set(axis, v);
            rec(c, k, axis + 1, on_face || v == lo || v == hi, cur, out);
        }
    }
    let mut out = Vec::new();
    let mut cur = c;
    rec(&c, k, 0, false, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Point {
        Point::from_slice(c)
    }

    fn e0(d: usize) -> EdgeId {
        EdgeId::along(Point::origin(d), 0)
    }

    #[test]
    fn planar_unit_shell() {
        let s = shell(e0(2), 1).unwrap();
        assert_eq!(s.vertices().len(), 8);
        assert_eq!(s.edges().len(), 8);
    }

    #[test]
    fn cubic_unit_shell() {
        assert_eq!(shell(e0(3), 1).unwrap().vertices().len(), 26);
    }

    #[test]
    fn rejects_nonpositive_k() {
        assert!(shell(e0(2), 0).is_err());
        assert!(shell(e0(2), -3).is_err());
    }

    #[test]
    fn enumeration_matches_filtered_cube() {
        for d in 1..=4 {
            for k in 1..=3 {
                let c = p(&[1, -2, 3, 0][..d]);
                let s = shell(EdgeId::along(c, 0), k).unwrap();
                let cube = crate::lattice::BoxRegion::centered(c, k).unwrap();
                let expected: Vec<_> = cube.iter().filter(|z| z.dist_inf(&c) == k).collect();
                assert_eq!(s.vertices(), &expected[..]);
                assert!(s.vertices().len() as i64 <= 2 * d as i64 * (2 * k + 1).pow(d as u32 - 1));
            }
        }
    }

    #[test]
    fn walk_stays_on_shell() {
        for d in 2..=3 {
            let s = shell(e0(d), 2).unwrap();
            let bound = 4 * d * d * 5;
            for a in s.vertices() {
                for b in s.vertices() {
                    let path = s.walk(a, b).unwrap();
                    assert_eq!(path.first(), Some(a));
                    assert_eq!(path.last(), Some(b));
                    assert!(path.len() - 1 <= bound);
                    for w in path.windows(2) {
                        assert!(w[0].is_adjacent(&w[1]));
                        assert!(s.contains(&w[1]));
                    }
                }
            }
        }
    }

    #[test]
    fn walk_in_one_dimension_is_absent() {
        let s = shell(e0(1), 2).unwrap();
        assert_eq!(s.vertices().len(), 2);
        assert!(s.walk(&p(&[-2]), &p(&[2])).is_none());
    }
}
