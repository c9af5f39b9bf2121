use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::frame::BoxFrame;
use crate::error::{Error, Result};
use crate::lattice::{BoxRegion, EdgeId, Point};

/// Which set of definitions to use. `V1` marks the heavy crossing edges as
/// the edges leaving `C \ ∂B`; `V2` marks the midpoints `E` of the skeleton
/// segments and the edges that step forward from them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SkeletonVariant {
    V1,
    V2,
}

/// Sparse scaffold inside an `n`-box.
///
/// * `D`: points of `n1 Z^d` at sup-distance `> n1` from the complement;
/// * `C`: the axis lines through `D`, clipped to the box;
/// * `C~`: nearest-neighbour edges inside `C`;
/// * `E` (v2): points of `C` at 1-distance exactly `n1/2` from a point of `D`;
/// * `E~`: heavy crossing edges (definition depends on the variant).
#[derive(Clone, Debug)]
pub struct Skeleton {
    frame: BoxFrame,
    b: BoxRegion,
    n1: i64,
    variant: SkeletonVariant,
    d_set: Vec<Point>,
    c_sorted: Vec<Point>,
    c_set: HashSet<Point>,
    c_edges: Vec<EdgeId>,
    e_sorted: Vec<Point>,
    e_set: HashSet<Point>,
    e_tilde: Vec<EdgeId>,
    component: HashMap<Point, u32>,
}

pub fn build_skeleton(frame: &BoxFrame, n1: i64, variant: SkeletonVariant) -> Result<Skeleton> {
    Skeleton::new(frame, n1, variant)
}

impl Skeleton {
    pub fn new(frame: &BoxFrame, n1: i64, variant: SkeletonVariant) -> Result<Self> {
        if n1 < 1 || n1 >= frame.n {
            return Err(Error::InvalidParameter(format!(
                "sub-scale must satisfy 1 <= n1 < n, got n1={n1}, n={}",
                frame.n
            )));
        }
        if variant == SkeletonVariant::V2 && (n1 < 2 || n1 % 2 != 0) {
            return Err(Error::InvalidParameter(format!("the v2 skeleton needs an even n1 >= 2, got {n1}")));
        }
        let b = frame.b_box();
        let d = frame.dim();

        // D: per-axis multiples of n1 in [lo + n1, hi - n1]
        let mut ranges = Vec::with_capacity(d);
        for i in 0..d {
            let lo = b.lo().get(i) + n1;
            let hi = b.hi().get(i) - n1;
            let first = lo.div_euclid(n1) + if lo.rem_euclid(n1) == 0 { 0 } else { 1 };
            let last = hi.div_euclid(n1);
            if first > last {
                return Err(Error::InvalidParameter(format!(
                    "skeleton is empty: no multiple of n1={n1} lies deep enough inside the box on axis {i}"
                )));
            }
            ranges.push((first * n1, last * n1));
        }
        let mut d_set = Vec::new();
        let mut cur = b.lo();
        fn rec(i: usize, ranges: &[(i64, i64)], n1: i64, cur: &mut Point, out: &mut Vec<Point>) {
            if i == ranges.len() {
                out.push(*cur);
                return;
            }
            let mut x = ranges[i].0;
            while x <= ranges[i].1 {
                cur.set(i, x);
                rec(i + 1, ranges, n1, cur, out);
                x += n1;
            }
        }
        rec(0, &ranges, n1, &mut cur, &mut d_set);

        let mut c_set = HashSet::new();
        for v in &d_set {
            for i in 0..d {
                let mut p = *v;
                for x in b.lo().get(i)..=b.hi().get(i) {
                    p.set(i, x);
                    c_set.insert(p);
                }
            }
        }
        let mut c_sorted: Vec<Point> = c_set.iter().copied().collect();
        c_sorted.sort_unstable();
        let mut c_edges = Vec::new();
        for p in &c_sorted {
            for i in 0..d {
                if c_set.contains(&p.step(i, 1)) {
                    c_edges.push(EdgeId::along(*p, i));
                }
            }
        }
        c_edges.sort_unstable();

        let mut e_set = HashSet::new();
        let mut e_tilde = Vec::new();
        match variant {
            SkeletonVariant::V1 => {
                let inner = |p: &Point| c_set.contains(p) && !b.is_on_boundary(p);
                for v in c_sorted.iter().filter(|p| inner(p)) {
                    for w in v.neighbours() {
                        if !inner(&w) {
                            e_tilde.push(EdgeId::new(*v, w).expect("neighbours"));
                        }
                    }
                }
            }
            SkeletonVariant::V2 => {
                let half = n1 / 2;
                for w in &d_set {
                    for i in 0..d {
                        for s in [-1, 1] {
                            let v = w.step(i, s * half);
                            if c_set.contains(&v) {
                                e_set.insert(v);
                            }
                        }
                    }
                }
                for v in &e_set {
                    for i in 0..d {
                        if c_set.contains(&v.step(i, 1)) {
                            e_tilde.push(EdgeId::along(*v, i));
                        }
                    }
                }
            }
        }
        e_tilde.sort_unstable();
        e_tilde.dedup();
        let mut e_sorted: Vec<Point> = e_set.iter().copied().collect();
        e_sorted.sort_unstable();

        let mut skel = Skeleton {
            frame: frame.clone(),
            b,
            n1,
            variant,
            d_set,
            c_sorted,
            c_set,
            c_edges,
            e_sorted,
            e_set,
            e_tilde,
            component: HashMap::new(),
        };
        if variant == SkeletonVariant::V2 {
            skel.component = skel.label_components();
        }
        Ok(skel)
    }

    fn label_components(&self) -> HashMap<Point, u32> {
        let mut comp = HashMap::new();
        let mut next = 0u32;
        for start in &self.c_sorted {
            if self.e_set.contains(start) || comp.contains_key(start) {
                continue;
            }
            comp.insert(*start, next);
            let mut queue = VecDeque::from([*start]);
            while let Some(p) = queue.pop_front() {
                for q in p.neighbours() {
                    if self.c_set.contains(&q) && !self.e_set.contains(&q) && !comp.contains_key(&q) {
                        comp.insert(q, next);
                        queue.push_back(q);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn frame(&self) -> &BoxFrame {
        &self.frame
    }

    /// The box `B^j(l;n)` itself.
    pub fn b_box(&self) -> &BoxRegion {
        &self.b
    }

    pub fn n1(&self) -> i64 {
        self.n1
    }

    pub fn variant(&self) -> SkeletonVariant {
        self.variant
    }

    pub fn d_points(&self) -> &[Point] {
        &self.d_set
    }

    /// Sorted `C`.
    pub fn c_points(&self) -> &[Point] {
        &self.c_sorted
    }

    pub fn in_c(&self, p: &Point) -> bool {
        self.c_set.contains(p)
    }

    /// Sorted `C~`.
    pub fn c_edges(&self) -> &[EdgeId] {
        &self.c_edges
    }

    pub fn is_c_edge(&self, e: &EdgeId) -> bool {
        self.c_edges.binary_search(e).is_ok()
    }

    /// Sorted `E` (empty for v1).
    pub fn e_points(&self) -> &[Point] {
        &self.e_sorted
    }

    pub fn in_e(&self, p: &Point) -> bool {
        self.e_set.contains(p)
    }

    /// Sorted `E~`.
    pub fn e_tilde(&self) -> &[EdgeId] {
        &self.e_tilde
    }

    pub fn is_e_tilde(&self, e: &EdgeId) -> bool {
        self.e_tilde.binary_search(e).is_ok()
    }

    pub fn is_on_boundary(&self, p: &Point) -> bool {
        self.b.is_on_boundary(p)
    }

    pub fn is_interior(&self, p: &Point) -> bool {
        self.b.contains(p) && !self.b.is_on_boundary(p)
    }

    /// `d (3n / n1)^{d-1} n`.
    pub fn c_cardinality_bound(&self) -> f64 {
        let d = self.frame.dim() as i32;
        let n = self.frame.n as f64;
        d as f64 * (3.0 * n / self.n1 as f64).powi(d - 1) * n
    }

    /// Component id of `a` in `C \ E` (v2 only).
    pub fn component_of(&self, a: &Point) -> Option<u32> {
        self.component.get(a).copied()
    }

    /// `F = {v in B \ (∂B ∪ C) : d_1(v, C) <= radius}`, sorted.
    pub fn f_set(&self, radius: f64) -> Vec<Point> {
        let field = self.field(&self.c_sorted);
        self.b
            .iter()
            .enumerate()
            .filter(|(i, p)| !self.b.is_on_boundary(p) && field[*i] > 0 && field[*i] as f64 <= radius)
            .map(|(_, p)| p)
            .collect()
    }

    /// Multi-source breadth-first 1-distance to `sources` over the box. The
    /// box is convex, so distances inside it are plain 1-norm distances.
    pub(crate) fn field(&self, sources: &[Point]) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.b.len()];
        let mut queue = VecDeque::new();
        for s in sources {
            if let Some(i) = self.b.index_of(s) {
                if dist[i] == u32::MAX {
                    dist[i] = 0;
                    queue.push_back(i);
                }
            }
        }
        while let Some(i) = queue.pop_front() {
            let p = self.b.point_at(i);
            for q in p.neighbours() {
                if let Some(j) = self.b.index_of(&q) {
                    if dist[j] == u32::MAX {
                        dist[j] = dist[i] + 1;
                        queue.push_back(j);
                    }
                }
            }
        }
        dist
    }

    /// Precomputed `ℓ`, `ℓ1` over the box (v2 only).
    pub fn distance_field(&self) -> Result<DistanceField<'_>> {
        self.require_v2("distance fields")?;
        Ok(DistanceField { skel: self, to_c: self.field(&self.c_sorted), to_e: self.field(&self.e_sorted) })
    }

    fn require_v2(&self, what: &str) -> Result<()> {
        if self.variant != SkeletonVariant::V2 {
            return Err(Error::Precondition(format!("{what} need the v2 skeleton")));
        }
        Ok(())
    }
}

/// `ℓ(e)`, `ℓ1(e)`, `ℓ2(e)`; each is the minimum over the two endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDistances {
    pub ell: u64,
    pub ell1: u64,
    pub ell2: u64,
}

pub struct DistanceField<'a> {
    skel: &'a Skeleton,
    to_c: Vec<u32>,
    to_e: Vec<u32>,
}

impl DistanceField<'_> {
    fn point(&self, p: &Point) -> (u64, u64) {
        match self.skel.b.index_of(p) {
            Some(i) => (self.to_e[i] as u64, self.to_c[i] as u64),
            None => (brute(p, &self.skel.e_sorted), brute(p, &self.skel.c_sorted)),
        }
    }

    /// `(ℓ(x), ℓ1(x), ℓ2(x))` for a vertex.
    pub fn vertex(&self, p: &Point) -> (u64, u64, u64) {
        let (e, c) = self.point(p);
        (e, c, e - c)
    }

    pub fn edge(&self, e: &EdgeId) -> EdgeDistances {
        let (a, a1, a2) = self.vertex(&e.lower());
        let (b, b1, b2) = self.vertex(&e.upper());
        EdgeDistances { ell: a.min(b), ell1: a1.min(b1), ell2: a2.min(b2) }
    }
}

fn brute(p: &Point, set: &[Point]) -> u64 {
    set.iter().map(|q| p.dist1(q) as u64).min().unwrap_or(u64::MAX)
}

/// Distances for a single edge (v2 skeleton).
pub fn edge_distances(skel: &Skeleton, e: &EdgeId) -> Result<EdgeDistances> {
    skel.require_v2("edge distances")?;
    let v = |p: &Point| {
        let e_ = brute(p, &skel.e_sorted);
        let c = brute(p, &skel.c_sorted);
        (e_, c, e_ - c)
    };
    let (a, a1, a2) = v(&e.lower());
    let (b, b1, b2) = v(&e.upper());
    Ok(EdgeDistances { ell: a.min(b), ell1: a1.min(b1), ell2: a2.min(b2) })
}

/// `#{e ⊂ B : ℓ(e) = ℓ}` for every occurring `ℓ`.
pub fn distance_counts(skel: &Skeleton) -> Result<BTreeMap<u64, u64>> {
    let field = skel.distance_field()?;
    let mut counts = BTreeMap::new();
    for p in skel.b.iter() {
        for i in 0..p.dim() {
            let q = p.step(i, 1);
            if skel.b.contains(&q) {
                *counts.entry(field.edge(&EdgeId::along(p, i)).ell).or_insert(0) += 1;
            }
        }
    }
    Ok(counts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathClause {
    /// (i) same component of `C \ E`.
    SameComponent,
    /// (ii) close points of `C`.
    NearInSkeleton,
    /// (iii) a boundary point close to a skeleton point.
    BoundaryToSkeleton,
    /// (iv) close points in different components; a crossing edge exists.
    Crossing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkeletonPath {
    pub clause: PathClause,
    /// Shortest path inside the stipulated set; `None` if the set does not
    /// connect the points.
    pub path: Option<Vec<Point>>,
    pub crossing: Option<EdgeId>,
}

/// Paths of length `|a - b|_1` through the skeleton, or the crossing edge that
/// separates two close points in different components.
pub fn skeleton_path(skel: &Skeleton, a: &Point, b: &Point) -> Result<SkeletonPath> {
    skel.require_v2("skeleton paths")?;
    let n1 = skel.n1;
    let dist = a.dist1(b);
    let close_strict = 4 * dist < n1;
    let close = 4 * dist <= n1;
    let in_c = |p: &Point| skel.c_set.contains(p);
    let in_ce = |p: &Point| skel.c_set.contains(p) && !skel.e_set.contains(p);

    if in_ce(a) && in_ce(b) {
        if skel.component_of(a) == skel.component_of(b) {
            return Ok(SkeletonPath { clause: PathClause::SameComponent, path: bfs_path(a, b, in_ce), crossing: None });
        }
        if close {
            let crossing = skel.e_tilde.iter().copied().find(|e| {
                let y1 = e.lower();
                let axis = e.axis();
                let on_line = |p: &Point| (0..p.dim()).all(|k| k == axis || p.get(k) == y1.get(k));
                4 * a.dist1(&y1) <= n1 + 4 && 4 * b.dist1(&y1) <= n1 + 4 && on_line(a) && on_line(b)
            });
            return Ok(SkeletonPath { clause: PathClause::Crossing, path: bfs_path(a, b, in_c), crossing });
        }
        return Err(Error::Precondition(format!(
            "{a} and {b} lie in different components and are farther apart than n1/4"
        )));
    }
    if in_c(a) && in_c(b) && close_strict {
        return Ok(SkeletonPath { clause: PathClause::NearInSkeleton, path: bfs_path(a, b, in_c), crossing: None });
    }
    if close_strict {
        let on_cb = |p: &Point| in_c(p) || skel.b.is_on_boundary(p);
        if skel.b.is_on_boundary(a) && in_c(b) {
            return Ok(SkeletonPath {
                clause: PathClause::BoundaryToSkeleton,
                path: bfs_path(a, b, on_cb),
                crossing: None,
            });
        }
        if skel.b.is_on_boundary(b) && in_c(a) {
            let path = bfs_path(b, a, on_cb).map(|mut p| {
                p.reverse();
                p
            });
            return Ok(SkeletonPath { clause: PathClause::BoundaryToSkeleton, path, crossing: None });
        }
    }
    Err(Error::Precondition(format!("no clause of the skeleton lemma applies to {a}, {b}")))
}

fn bfs_path(a: &Point, b: &Point, allowed: impl Fn(&Point) -> bool) -> Option<Vec<Point>> {
    if !allowed(a) || !allowed(b) {
        return None;
    }
    let mut prev: HashMap<Point, Point> = HashMap::from([(*a, *a)]);
    let mut queue = VecDeque::from([*a]);
    while let Some(p) = queue.pop_front() {
        if p == *b {
            let mut path = vec![p];
            let mut cur = p;
            while cur != *a {
                cur = prev[&cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for q in p.neighbours() {
            if allowed(&q) && !prev.contains_key(&q) {
                prev.insert(q, p);
                queue.push_back(q);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(d: usize, n: i64) -> BoxFrame {
        BoxFrame::new(Point::origin(d), n, 1).unwrap()
    }

    #[test]
    fn d_points_are_deep_grid_points() {
        let f = frame(2, 6);
        let s = build_skeleton(&f, 2, SkeletonVariant::V1).unwrap();
        assert!(!s.d_points().is_empty());
        for p in s.d_points() {
            assert!(f.dist_to_complement(p) > 2);
            assert!(p.coords().iter().all(|c| c % 2 == 0));
        }
        // exhaustive oracle from the definition
        let expected: Vec<Point> = f
            .b_box()
            .iter()
            .filter(|p| f.dist_to_complement(p) > 2 && p.coords().iter().all(|c| c.rem_euclid(2) == 0))
            .collect();
        assert_eq!(s.d_points(), &expected[..]);
        assert!(s.c_points().len() as f64 <= s.c_cardinality_bound());
    }

    #[test]
    fn v1_crossing_edges_leave_the_inner_skeleton() {
        let s = build_skeleton(&frame(2, 12), 4, SkeletonVariant::V1).unwrap();
        for e in s.e_tilde() {
            let [a, b] = e.endpoints();
            let inner = |p: &Point| s.in_c(p) && !s.is_on_boundary(p);
            assert!(inner(&a) != inner(&b));
        }
        assert!(!s.e_tilde().is_empty());
    }

    #[test]
    fn v2_midpoints_have_partners() {
        let s = build_skeleton(&frame(2, 24), 4, SkeletonVariant::V2).unwrap();
        assert!(!s.e_points().is_empty());
        for v in s.e_points() {
            assert!(s.c_points().iter().any(|w| v.dist1(w) == 2));
            assert!(s.d_points().iter().any(|w| v.dist1(w) == 2));
        }
        assert_eq!(s.e_tilde().len(), s.e_points().len());
    }

    #[test]
    fn v2_rejects_odd_sub_scale() {
        assert!(build_skeleton(&frame(2, 24), 3, SkeletonVariant::V2).is_err());
        assert!(build_skeleton(&frame(2, 6), 6, SkeletonVariant::V1).is_err());
    }

    #[test]
    fn same_component_path_is_straight() {
        let s = build_skeleton(&frame(2, 24), 8, SkeletonVariant::V2).unwrap();
        let d0 = s.d_points()[0];
        let a = d0.step(0, 3);
        let b = d0.step(1, -3);
        let r = skeleton_path(&s, &a, &b).unwrap();
        assert_eq!(r.clause, PathClause::SameComponent);
        assert_eq!(r.path.unwrap().len() as i64 - 1, a.dist1(&b));
        let same = skeleton_path(&s, &a, &a).unwrap();
        assert_eq!(same.path.unwrap().len(), 1);
    }

    #[test]
    fn crossing_edge_between_components() {
        let s = build_skeleton(&frame(2, 24), 8, SkeletonVariant::V2).unwrap();
        let d0 = s.d_points()[0];
        // the midpoint is d0 + 4 e_1; straddle it
        let a = d0.step(0, 3);
        let b = d0.step(0, 5);
        assert_ne!(s.component_of(&a), s.component_of(&b));
        let r = skeleton_path(&s, &a, &b).unwrap();
        assert_eq!(r.clause, PathClause::Crossing);
        let y = r.crossing.unwrap().lower();
        assert!(4 * a.dist1(&y) <= 8 + 4);
        assert_eq!(r.path.unwrap().len(), 3);
    }

    #[test]
    fn distances_vanish_on_midpoints() {
        let s = build_skeleton(&frame(2, 24), 4, SkeletonVariant::V2).unwrap();
        let field = s.distance_field().unwrap();
        for e in s.e_tilde() {
            assert_eq!(field.edge(e).ell, 0);
            assert_eq!(edge_distances(&s, e).unwrap(), field.edge(e));
        }
        let counts = distance_counts(&s).unwrap();
        assert!(counts.keys().all(|&l| l <= 2 * 2 * 4));
    }
}
