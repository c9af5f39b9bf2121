use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::bidir::meet;
use super::search::{for_each_neighbour, Search};
use super::{check_boxes, check_dims, tie_tolerance};
use crate::error::{Error, Result};
use crate::lattice::{BoxRegion, EdgeId, Point, Region};
use crate::weights::WeightConfig;

/// An edge of the geodesic DAG, oriented away from the source.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DagEdge {
    pub from: Point,
    pub to: Point,
    pub edge: EdgeId,
    pub weight: f64,
}

/// Union of all optimal paths between two terminal sets.
///
/// An oriented edge `u -> u'` is present when `t(v,u) + tau_e` matches
/// `t(v,u')` within the tie tolerance, `u` was settled before `u'`, and `u'`
/// leads on to a target along such edges. Orienting by settle order keeps the
/// graph acyclic on zero-weight plateaus while retaining the shortest-path
/// tree, so at least one representative of every geodesic's support survives.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeodesicDag {
    sources: Vec<Point>,
    targets: Vec<Point>,
    time: f64,
    tolerance: f64,
    edges: Vec<DagEdge>,
    labels: Vec<(Point, f64)>,
    boundary_reached: bool,
    touches_boundary: bool,
}

impl GeodesicDag {
    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Source terminals.
    pub fn sources(&self) -> &[Point] {
        &self.sources
    }

    /// Target terminals at which the minimum is attained.
    pub fn targets(&self) -> &[Point] {
        &self.targets
    }

    /// Edges sorted by edge id.
    pub fn edges(&self) -> &[DagEdge] {
        &self.edges
    }

    /// DAG vertices, sorted.
    pub fn vertices(&self) -> impl Iterator<Item = Point> + '_ {
        self.labels.iter().map(|(p, _)| *p)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// `t(v, u)` for a DAG vertex `u`.
    pub fn label_from_source(&self, u: &Point) -> Option<f64> {
        self.labels.binary_search_by(|(p, _)| p.cmp(u)).ok().map(|i| self.labels[i].1)
    }

    /// `t(u, w)` for a DAG vertex `u`, as `t(v,w) - t(v,u)`.
    pub fn label_to_target(&self, u: &Point) -> Option<f64> {
        self.label_from_source(u).map(|f| self.time - f)
    }

    pub fn contains_edge(&self, e: &EdgeId) -> bool {
        self.edges.binary_search_by(|x| x.edge.cmp(e)).is_ok()
    }

    /// False certifies that no path through the region boundary comes within
    /// the tie tolerance of the passage time, so the DAG is also the
    /// unrestricted geodesic set.
    pub fn boundary_reached(&self) -> bool {
        self.boundary_reached
    }

    /// Some DAG vertex lies on the inner boundary of the region.
    pub fn touches_boundary(&self) -> bool {
        self.touches_boundary
    }

    /// The unique geodesic when the DAG is a simple path.
    pub fn single_path(&self) -> Option<Vec<Point>> {
        if self.edges.is_empty() {
            return self.sources.iter().find(|s| self.targets.contains(s)).map(|s| vec![*s]);
        }
        let mut next: HashMap<Point, Point> = HashMap::new();
        let mut has_pred: HashSet<Point> = HashSet::new();
        for e in &self.edges {
            if next.insert(e.from, e.to).is_some() || !has_pred.insert(e.to) {
                return None;
            }
        }
        let mut starts = self.edges.iter().map(|e| e.from).filter(|p| !has_pred.contains(p));
        let start = starts.next()?;
        if starts.next().is_some() {
            return None;
        }
        let mut path = vec![start];
        while let Some(n) = next.get(path.last().expect("nonempty")) {
            path.push(*n);
        }
        (path.len() == self.edges.len() + 1).then_some(path)
    }

    fn adjacency(&self) -> HashMap<Point, Vec<(Point, f64)>> {
        let mut adj: HashMap<Point, Vec<(Point, f64)>> = HashMap::new();
        for e in &self.edges {
            adj.entry(e.from).or_default().push((e.to, e.weight));
        }
        adj
    }

    /// Whether the sub-DAG of edges with weight `<= theta` still connects
    /// some source to some target.
    fn connects_below(&self, adj: &HashMap<Point, Vec<(Point, f64)>>, theta: f64) -> bool {
        let targets: HashSet<Point> = self.targets.iter().copied().collect();
        let mut seen: HashSet<Point> = self.sources.iter().copied().collect();
        let mut queue: VecDeque<Point> = self.sources.iter().copied().collect();
        while let Some(u) = queue.pop_front() {
            if targets.contains(&u) {
                return true;
            }
            for &(v, w) in adj.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
                if w <= theta && seen.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        false
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxWeightStats {
    /// `max over geodesics of M(Gamma)`.
    pub max_over_geodesics: f64,
    /// `min over geodesics of M(Gamma)`.
    pub min_over_geodesics: f64,
    /// DAG edges attaining the maximum.
    pub argmax: Vec<EdgeId>,
}

/// Maximal-edge statistics over the geodesic set.
///
/// The maximum is the heaviest DAG edge, since every DAG edge lies on a
/// geodesic. The minimum is the smallest threshold at which the DAG edges no
/// heavier than it still connect the terminals, found by binary search over
/// the distinct edge weights.
pub fn max_weight_stats(dag: &GeodesicDag) -> Result<MaxWeightStats> {
    if dag.edges.is_empty() {
        return Err(Error::Precondition("geodesic DAG has no edges".into()));
    }
    let max = dag.edges.iter().map(|e| e.weight).fold(f64::NEG_INFINITY, f64::max);
    let argmax = dag.edges.iter().filter(|e| e.weight == max).map(|e| e.edge).collect();
    let mut ws: Vec<f64> = dag.edges.iter().map(|e| e.weight).collect();
    ws.sort_by(f64::total_cmp);
    ws.dedup();
    let adj = dag.adjacency();
    let (mut lo, mut hi) = (0usize, ws.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if dag.connects_below(&adj, ws[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(MaxWeightStats { max_over_geodesics: max, min_over_geodesics: ws[lo], argmax })
}

/// Geodesic DAG from `v` to `w` inside `region`.
pub fn geodesic_dag(cfg: &WeightConfig, v: Point, w: Point, region: &Region) -> Result<GeodesicDag> {
    geodesic_dag_by(|e: &EdgeId| cfg.weight(e), |t| tie_tolerance(cfg, t), &[v], &[w], region)
}

/// Geodesic DAG between two disjoint vertex sets inside `env`.
pub fn box_to_box_dag(cfg: &WeightConfig, d0: &Region, d1: &Region, env: &Region) -> Result<GeodesicDag> {
    let (sources, targets) = check_boxes(d0, d1, env)?;
    geodesic_dag_by(|e: &EdgeId| cfg.weight(e), |t| tie_tolerance(cfg, t), &sources, &targets, env)
}

/// Geodesic DAG for an arbitrary weight function and tolerance rule.
///
/// Grows a ball of radius `T/2` around the sources and one of radius
/// `T/2 + tol` around the targets. Along any geodesic the first vertex in the
/// target ball satisfies `t(v,x) + t(x,w) <= T + tol` using the source-side
/// labels, tentative ones included, and its predecessor lies in the source
/// ball. Such entry vertices seed two tight walks: back to the sources
/// through the source ball and on to the targets through the target ball.
pub fn geodesic_dag_by<W, T>(
    weight: W,
    tolerance: T,
    sources: &[Point],
    targets: &[Point],
    region: &Region,
) -> Result<GeodesicDag>
where
    W: Fn(&EdgeId) -> f64,
    T: Fn(f64) -> f64,
{
    let (source_idx, target_idx) = terminal_indices(sources, targets, region)?;
    let mut m = meet(&weight, region, &source_idx, &target_idx)?;
    if m.time.is_infinite() {
        return Err(Error::Disconnected);
    }
    let time = m.time;
    let tol = tolerance(time);
    let (rf, rb) = (time / 2.0, time / 2.0 + tol);
    m.fwd.run_through(rf);
    m.bwd.run_through(rb);
    let (fwd, bwd) = (&m.fwd, &m.bwd);
    let bound = time + tol;
    let is_source: HashSet<u32> = source_idx.iter().copied().collect();
    let is_target: HashSet<u32> = target_idx.iter().copied().collect();

    let mut edges = Vec::new();
    let mut f_seen: HashSet<u32> = HashSet::new();
    let mut f_queue = VecDeque::new();
    let mut b_seen: HashSet<u32> = HashSet::new();
    let mut b_queue = VecDeque::new();
    for &x in bwd.settled_vertices().iter().filter(|&&x| fwd.dist(x) + bwd.dist(x) <= bound) {
        let q = region.point_at(x as usize);
        let mut preds = Vec::new();
        for_each_neighbour(region, x as usize, &q, |u, axis, sign| {
            let Some(u) = u.map(|u| u as u32) else { return };
            if !fwd.is_settled(u) {
                return;
            }
            let e = EdgeId::from_step(q, axis, sign);
            let tau = fwd.weight(&e);
            if tau.is_finite() && fwd.dist(u) + tau + bwd.dist(x) <= bound {
                preds.push((u, e, tau));
            }
        });
        // only the first vertex of a geodesic inside the target ball seeds
        // the walks; on zero-weight plateaus other vertices can meet the
        // label condition without lying on any self-avoiding geodesic
        if !is_source.contains(&x) && preds.iter().all(|&(u, _, _)| bwd.is_settled(u)) {
            continue;
        }
        if b_seen.insert(x) {
            b_queue.push_back(x);
        }
        if fwd.is_settled(x) {
            if f_seen.insert(x) {
                f_queue.push_back(x);
            }
            continue;
        }
        for (u, e, tau) in preds {
            edges.push(DagEdge { from: region.point_at(u as usize), to: q, edge: e, weight: tau });
            if f_seen.insert(u) {
                f_queue.push_back(u);
            }
        }
    }
    // back to the sources along edges tight for the source-side labels
    while let Some(j) = f_queue.pop_front() {
        if is_source.contains(&j) {
            continue;
        }
        let q = region.point_at(j as usize);
        let (dj, rj) = (fwd.dist(j), fwd.rank(j));
        for_each_neighbour(region, j as usize, &q, |i, axis, sign| {
            let Some(i) = i.map(|i| i as u32) else { return };
            if !fwd.is_settled(i) || fwd.rank(i) >= rj {
                return;
            }
            let e = EdgeId::from_step(q, axis, sign);
            let tau = fwd.weight(&e);
            if tau.is_finite() && fwd.dist(i) + tau <= dj + tol {
                edges.push(DagEdge { from: region.point_at(i as usize), to: q, edge: e, weight: tau });
                if f_seen.insert(i) {
                    f_queue.push_back(i);
                }
            }
        });
    }
    // on to the targets along edges tight for the target-side labels
    while let Some(j) = b_queue.pop_front() {
        if is_target.contains(&j) {
            continue;
        }
        let q = region.point_at(j as usize);
        let (dj, rj) = (bwd.dist(j), bwd.rank(j));
        for_each_neighbour(region, j as usize, &q, |i, axis, sign| {
            let Some(i) = i.map(|i| i as u32) else { return };
            if !bwd.is_settled(i) || bwd.rank(i) >= rj {
                return;
            }
            let e = EdgeId::from_step(q, axis, sign);
            let tau = bwd.weight(&e);
            if tau.is_finite() && bwd.dist(i) + tau <= dj + tol {
                edges.push(DagEdge { from: q, to: region.point_at(i as usize), edge: e, weight: tau });
                if b_seen.insert(i) {
                    b_queue.push_back(i);
                }
            }
        });
    }
    edges.sort_by_key(|e| e.edge);
    edges.dedup_by_key(|e| e.edge);

    let vertices: HashSet<u32> = f_seen.union(&b_seen).copied().collect();
    let mut touches_boundary = false;
    let mut labels: Vec<(Point, f64)> = Vec::with_capacity(vertices.len());
    for &i in &vertices {
        let p = region.point_at(i as usize);
        for_each_neighbour(region, i as usize, &p, |j, _, _| touches_boundary |= j.is_none());
        let label = if fwd.is_settled(i) { fwd.dist(i) } else { time - bwd.dist(i) };
        labels.push((p, label));
    }
    labels.sort_by_key(|l| l.0);
    let mut sources: Vec<Point> = sources.to_vec();
    sources.sort();
    sources.dedup();
    let mut targets: Vec<Point> =
        target_idx.iter().filter(|i| b_seen.contains(i)).map(|&i| region.point_at(i as usize)).collect();
    targets.sort();
    targets.dedup();

    // a path through the boundary costs at least the sum of the two sides'
    // boundary labels; unsettled labels exceed the ball radii
    let (ef, eb) = (fwd.first_boundary_label(), bwd.first_boundary_label());
    let boundary_reached = (ef <= rf || eb <= rb) && ef.min(rf) + eb.min(rb) <= bound;
    Ok(GeodesicDag { sources, targets, time, tolerance: tol, edges, labels, boundary_reached, touches_boundary })
}

fn terminal_indices(sources: &[Point], targets: &[Point], region: &Region) -> Result<(Vec<u32>, Vec<u32>)> {
    region.len().ok_or(Error::InfiniteRegion)?;
    if sources.is_empty() || targets.is_empty() {
        return Err(Error::InvalidParameter("terminal sets must be nonempty".into()));
    }
    let idx = |ps: &[Point]| -> Result<Vec<u32>> {
        ps.iter()
            .map(|p| {
                check_dims(p, region)?;
                region.index_of(p).map(|i| i as u32).ok_or_else(|| Error::OutsideRegion(p.to_string()))
            })
            .collect()
    };
    Ok((idx(sources)?, idx(targets)?))
}

type Forward<'r, W> = (Search<'r, W>, f64, f64, Vec<u32>);

/// Settles everything within `T + tol` of the sources and returns the search,
/// `T`, the tolerance and the target indices attaining `T`.
fn forward<'r, W, T>(
    weight: W,
    tolerance: T,
    sources: &[Point],
    targets: &[Point],
    region: &'r Region,
) -> Result<Forward<'r, W>>
where
    W: Fn(&EdgeId) -> f64,
    T: Fn(f64) -> f64,
{
    if sources.is_empty() || targets.is_empty() {
        return Err(Error::InvalidParameter("terminal sets must be nonempty".into()));
    }
    for p in sources.iter().chain(targets) {
        check_dims(p, region)?;
    }
    let target_idx: Vec<u32> = targets
        .iter()
        .map(|p| region.index_of(p).map(|i| i as u32).ok_or_else(|| Error::OutsideRegion(p.to_string())))
        .collect::<Result<_>>()?;
    let is_target: HashSet<u32> = target_idx.iter().copied().collect();
    let mut s = Search::new(region, weight)?;
    for p in sources {
        s.add_source(p)?;
    }
    let time = loop {
        match s.settle_next() {
            Some((i, d)) if is_target.contains(&i) => break d,
            Some(_) => {}
            None => return Err(Error::Disconnected),
        }
    };
    let tol = tolerance(time);
    s.run_through(time + tol);
    let mut attained: Vec<u32> =
        target_idx.into_iter().filter(|&i| s.is_settled(i) && s.dist(i) <= time + tol).collect();
    attained.sort_unstable();
    attained.dedup();
    Ok((s, time, tol, attained))
}

/// Every self-avoiding geodesic from `v` to `w` inside `region`.
pub fn enumerate_geodesics(
    cfg: &WeightConfig,
    v: Point,
    w: Point,
    region: &Region,
    cap: usize,
) -> Result<Vec<Vec<Point>>> {
    enumerate_geodesics_by(|e: &EdgeId| cfg.weight(e), |t| tie_tolerance(cfg, t), v, w, region, cap)
}

/// [`enumerate_geodesics`] with an arbitrary weight function.
///
/// Depth-first search along tight edges in either orientation, so that
/// geodesics crossing zero-weight plateaus against the DAG orientation are
/// also listed. Fails with an overflow error once more than `cap` paths exist.
pub fn enumerate_geodesics_by<W, T>(
    weight: W,
    tolerance: T,
    v: Point,
    w: Point,
    region: &Region,
    cap: usize,
) -> Result<Vec<Vec<Point>>>
where
    W: Fn(&EdgeId) -> f64,
    T: Fn(f64) -> f64,
{
    let (s, time, tol, attained) = forward(weight, tolerance, &[v], &[w], region)?;
    let target = attained[0];

    // vertices from which the target is reachable along tight edges
    let mut useful: HashSet<u32> = HashSet::from([target]);
    let mut queue = VecDeque::from([target]);
    while let Some(j) = queue.pop_front() {
        let q = region.point_at(j as usize);
        let dj = s.dist(j);
        for_each_neighbour(region, j as usize, &q, |i, axis, sign| {
            let Some(i) = i.map(|i| i as u32) else { return };
            if !s.is_settled(i) || useful.contains(&i) {
                return;
            }
            let tau = s.weight(&EdgeId::from_step(q, axis, sign));
            if tau.is_finite() && s.dist(i) + tau <= dj + tol {
                useful.insert(i);
                queue.push_back(i);
            }
        });
    }

    struct Dfs<'a, 'r, W> {
        s: &'a Search<'r, W>,
        region: &'r Region,
        useful: &'a HashSet<u32>,
        target: u32,
        bound: f64,
        tol: f64,
        cap: usize,
        path: Vec<u32>,
        on_path: HashSet<u32>,
        out: Vec<Vec<Point>>,
    }
    impl<W: Fn(&EdgeId) -> f64> Dfs<'_, '_, W> {
        fn go(&mut self, u: u32, cost: f64) -> Result<()> {
            if u == self.target {
                if cost <= self.bound {
                    if self.out.len() == self.cap {
                        return Err(Error::EnumerationOverflow { cap: self.cap });
                    }
                    self.out.push(self.path.iter().map(|&i| self.region.point_at(i as usize)).collect());
                }
                return Ok(());
            }
            let p = self.region.point_at(u as usize);
            let mut next = Vec::with_capacity(2 * p.dim());
            for_each_neighbour(self.region, u as usize, &p, |i, axis, sign| {
                let Some(i) = i.map(|i| i as u32) else { return };
                if !self.useful.contains(&i) || self.on_path.contains(&i) {
                    return;
                }
                let tau = self.s.weight(&EdgeId::from_step(p, axis, sign));
                if tau.is_finite() && cost + tau <= self.s.dist(i) + self.tol {
                    next.push((i, cost + tau));
                }
            });
            for (i, c) in next {
                self.path.push(i);
                self.on_path.insert(i);
                self.go(i, c)?;
                self.on_path.remove(&i);
                self.path.pop();
            }
            Ok(())
        }
    }

    let start = region.index_of(&v).expect("checked") as u32;
    if !useful.contains(&start) {
        return Ok(Vec::new());
    }
    let mut dfs = Dfs {
        s: &s,
        region,
        useful: &useful,
        target,
        bound: time + tol,
        tol,
        cap,
        path: vec![start],
        on_path: HashSet::from([start]),
        out: Vec::new(),
    };
    dfs.go(start, 0.0)?;
    Ok(dfs.out)
}

/// Result of checking that geodesics from `0` to `N e_1` stay in `B_{KN}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeCheck {
    pub contained: bool,
    /// Largest inf-norm distance from a DAG vertex to the segment `[0, N e_1]`.
    pub max_displacement: i64,
    pub time: f64,
    pub boundary_reached: bool,
}

/// Computes the geodesic DAG from `0` to `N e_1` in `domain` and reports
/// whether it stays inside `B_{KN} = [-KN, KN]^d`.
pub fn geodesic_envelope_check(cfg: &WeightConfig, n: i64, k: i64, domain: &BoxRegion) -> Result<EnvelopeCheck> {
    if n < 1 || k < 1 {
        return Err(Error::InvalidParameter(format!("need N >= 1 and K >= 1, got N={n}, K={k}")));
    }
    let d = domain.dim();
    let bkn = BoxRegion::centered(Point::origin(d), k * n)?;
    let strictly_larger = (0..d).all(|i| domain.lo().get(i) < bkn.lo().get(i) && domain.hi().get(i) > bkn.hi().get(i));
    if !strictly_larger {
        return Err(Error::DomainTooSmall(format!(
            "domain [{}, {}] does not strictly contain B_KN = [{}, {}]",
            domain.lo(),
            domain.hi(),
            bkn.lo(),
            bkn.hi()
        )));
    }
    let region = Region::Box(domain.clone());
    let dag = geodesic_dag(cfg, Point::origin(d), Point::axis(d, 0, n), &region)?;
    let displacement = |p: Point| {
        let x = p.get(0);
        let along = if x < 0 {
            -x
        } else if x > n {
            x - n
        } else {
            0
        };
        (1..d).map(|i| p.get(i).abs()).fold(along, i64::max)
    };
    let contained = dag.vertices().all(|p| bkn.contains(&p));
    let max_displacement = dag.vertices().map(displacement).max().unwrap_or(0);
    Ok(EnvelopeCheck { contained, max_displacement, time: dag.time(), boundary_reached: dag.boundary_reached() })
}
