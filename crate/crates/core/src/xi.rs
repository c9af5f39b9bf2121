//! The hierarchical edge family Ξ: a tree of disjoint edge sets carrying
//! `2^{(d-1)n}` near-parallel routes from the origin across a slab.
//!
//! Level `k` sets start on the hyperplane `x_1 = d 2^k` at height
//! `u_k = sum_{s<=k} 2^{k-s} i_s`, follow the sequence `v(i)` (which doubles the
//! transverse coordinates and then runs along `e_1`) up to `x_1 = d 2^{k+1}`,
//! and end with the unit transverse cube there, through which the next level
//! picks its child by the bits `i_{k+1}`.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{EdgeId, Point, MAX_DIM};
use crate::weights::WeightConfig;

/// Largest `(d-1) n` accepted by [`build_xi`]; the leaf count is `2^{(d-1)n}`.
pub const MAX_LEAF_BITS: u32 = 24;

/// The sequence `v(i)`.
///
/// With `S_a = v_2 + ... + v_a`, for `2 S_{a-1} < i <= 2 S_a` the first
/// coordinate gains `ceil(i/2)`, coordinates `2..a-1` are doubled and
/// coordinate `a` gains `floor(i/2) - S_{a-1}`; past `2 S_d` only the first
/// coordinate moves. Consecutive terms are nearest neighbours and
/// `|v(i)|_1 = |v|_1 + i`.
pub fn v_sequence(v: &Point, i: u64) -> Result<Point> {
    if v.coords().iter().any(|&c| c < 0) {
        return Err(Error::InvalidParameter(format!("v must have nonnegative coordinates, got {v}")));
    }
    let i = i64::try_from(i).map_err(|_| Error::InvalidParameter("index too large".into()))?;
    let d = v.dim();
    let mut out = *v;
    let mut s_prev = 0i64;
    for a in 1..d {
        let s_a = s_prev + v.get(a);
        if i <= 2 * s_a {
            out.set(0, v.get(0) + (i + 1) / 2);
            for b in 1..a {
                out.set(b, 2 * v.get(b));
            }
            out.set(a, v.get(a) + i / 2 - s_prev);
            return Ok(out);
        }
        s_prev = s_a;
    }
    out.set(0, v.get(0) + i - s_prev);
    for b in 1..d {
        out.set(b, 2 * v.get(b));
    }
    Ok(out)
}

/// One member `Ξ^{i_1..i_k, k}` of the family; level 0 is `Ξ^{0,0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiSet {
    pub level: usize,
    /// `i_1..i_k`, each a bit mask over the transverse axes `2..d`.
    pub index: Vec<u32>,
    pub start: Point,
    /// Vertex where the route leaves through the terminal cube.
    pub end: Point,
    /// Sorted, deduplicated.
    pub edges: Vec<EdgeId>,
}

impl XiSet {
    pub fn contains(&self, e: &EdgeId) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiFamily {
    pub d: usize,
    pub m: i64,
    pub n: u32,
    /// `Ξ^{0,0}` first, then each level in lexicographic index order.
    pub sets: Vec<XiSet>,
}

/// Result of [`build_xi`]. For `m <= 12d` no level fits and only the straight
/// segment from `0` to `m e_1` is returned.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum XiConstruction {
    Family(XiFamily),
    Degenerate { d: usize, m: i64, straight: Vec<EdgeId> },
}

impl XiConstruction {
    pub fn family(&self) -> Option<&XiFamily> {
        match self {
            XiConstruction::Family(f) => Some(f),
            XiConstruction::Degenerate { .. } => None,
        }
    }

    pub fn into_family(self) -> Option<XiFamily> {
        match self {
            XiConstruction::Family(f) => Some(f),
            XiConstruction::Degenerate { .. } => None,
        }
    }
}

/// Largest `n` with `6 d 2^n <= m`, i.e. `floor(log2(m / 6d))`.
pub fn depth(d: usize, m: i64) -> Option<u32> {
    let unit = 6 * d as i64;
    if d == 0 || m < unit {
        return None;
    }
    let mut n = 0u32;
    while n < 62 && unit.checked_shl(n + 1).is_some_and(|v| v > 0 && v <= m) {
        n += 1;
    }
    Some(n)
}

pub fn build_xi(d: usize, m: i64) -> Result<XiConstruction> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::Dimension(d));
    }
    if m < 0 {
        return Err(Error::InvalidParameter(format!("m must be >= 0, got {m}")));
    }
    if m <= 12 * d as i64 {
        let straight = (0..m).map(|x| EdgeId::along(Point::axis(d, 0, x), 0)).collect();
        return Ok(XiConstruction::Degenerate { d, m, straight });
    }
    let n = depth(d, m).expect("m > 12d");
    if (d as u32 - 1) * n > MAX_LEAF_BITS {
        return Err(Error::ResourceCap(format!("Xi family with d={d}, n={n} has too many leaves")));
    }
    let mut sets = vec![root_set(d)];
    let radix = 1u32 << (d - 1);
    for k in 1..=n as usize {
        let count = 1usize << ((d - 1) * k);
        for code in 0..count {
            let index = decode_index(code, radix, k);
            sets.push(level_set(d, k, index)?);
        }
    }
    Ok(XiConstruction::Family(XiFamily { d, m, n, sets }))
}

/// Mixed-radix digits of `code`, most significant (level 1) first.
fn decode_index(mut code: usize, radix: u32, k: usize) -> Vec<u32> {
    let mut index = vec![0u32; k];
    for slot in index.iter_mut().rev() {
        *slot = (code % radix as usize) as u32;
        code /= radix as usize;
    }
    index
}

/// `u_k = sum_s 2^{k-s} i_s` as a transverse vector of length `d - 1`.
pub fn height(d: usize, index: &[u32]) -> Vec<i64> {
    let mut u = vec![0i64; d - 1];
    for &bits in index {
        for (c, slot) in u.iter_mut().enumerate() {
            *slot = 2 * *slot + ((bits >> c) & 1) as i64;
        }
    }
    u
}

fn with_height(d: usize, x: i64, u: &[i64]) -> Point {
    let mut p = Point::axis(d, 0, x);
    for (c, &h) in u.iter().enumerate() {
        p.set(c + 1, h);
    }
    p
}

/// Edges of the unit cube spanned by `e_2..e_d` at `v`.
fn transverse_cube(v: Point) -> Vec<EdgeId> {
    let d = v.dim();
    let mut out = Vec::new();
    for mask in 0u32..(1 << (d - 1)) {
        let mut corner = v;
        for c in 0..d - 1 {
            if mask >> c & 1 == 1 {
                corner = corner.step(c + 1, 1);
            }
        }
        for c in 0..d - 1 {
            if mask >> c & 1 == 0 {
                out.push(EdgeId::along(corner, c + 1));
            }
        }
    }
    out
}

fn root_set(d: usize) -> XiSet {
    let end = Point::axis(d, 0, 2 * d as i64);
    let mut edges: Vec<EdgeId> = (0..2 * d as i64).map(|x| EdgeId::along(Point::axis(d, 0, x), 0)).collect();
    edges.extend(transverse_cube(end));
    edges.sort_unstable();
    edges.dedup();
    XiSet { level: 0, index: Vec::new(), start: Point::origin(d), end, edges }
}

fn level_set(d: usize, k: usize, index: Vec<u32>) -> Result<XiSet> {
    let u = height(d, &index);
    let start = with_height(d, (d as i64) << k, &u);
    let limit = (d as i64) << (k + 1);
    let mut edges = Vec::new();
    let mut cur = start;
    let mut i = 0u64;
    loop {
        let next = v_sequence(&start, i + 1)?;
        if next.get(0) > limit {
            break;
        }
        edges.push(EdgeId::new(cur, next)?);
        cur = next;
        i += 1;
    }
    edges.extend(transverse_cube(cur));
    edges.sort_unstable();
    edges.dedup();
    Ok(XiSet { level: k, index, start, end: cur, edges })
}

impl XiFamily {
    pub fn root(&self) -> &XiSet {
        &self.sets[0]
    }

    pub fn level(&self, k: usize) -> impl Iterator<Item = &XiSet> + '_ {
        self.sets.iter().filter(move |s| s.level == k)
    }

    pub fn get(&self, index: &[u32]) -> Option<&XiSet> {
        self.sets.iter().find(|s| s.index == index)
    }

    /// All leaf indices `(i_1..i_n)` in lexicographic order.
    pub fn leaves(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        let radix = 1u32 << (self.d - 1);
        let k = self.n as usize;
        (0..1usize << ((self.d - 1) * k)).map(move |code| decode_index(code, radix, k))
    }

    /// Endpoint `(d 2^{n+1}, sum_j 2^{n-j+1} i_j)` required for a leaf.
    pub fn leaf_target(&self, leaf: &[u32]) -> Point {
        let u: Vec<i64> = height(self.d, leaf).into_iter().map(|h| 2 * h).collect();
        with_height(self.d, (self.d as i64) << (self.n + 1), &u)
    }

    /// Chain `Ξ^{0,0}, Ξ^{i_1,1}, ..., Ξ^{i_1..i_n,n}` for a leaf.
    pub fn chain(&self, leaf: &[u32]) -> Result<Vec<&XiSet>> {
        let mut out = vec![self.root()];
        for k in 1..=leaf.len() {
            let s = self
                .get(&leaf[..k])
                .ok_or_else(|| Error::InvalidParameter(format!("no set with index {:?}", &leaf[..k])))?;
            out.push(s);
        }
        Ok(out)
    }

    /// Explicit route from the origin for a leaf: along each set's path, then
    /// across its terminal cube to where the next level starts. Fails when a
    /// step uses an edge outside the set it is attributed to.
    pub fn assemble_path(&self, leaf: &[u32]) -> Result<Vec<Point>> {
        if leaf.len() != self.n as usize {
            return Err(Error::InvalidParameter(format!("leaf must have {} levels", self.n)));
        }
        let chain = self.chain(leaf)?;
        let d = self.d;
        let mut path = vec![Point::origin(d)];
        for (k, set) in chain.iter().enumerate() {
            let mut cur = *path.last().expect("nonempty");
            if cur != set.start {
                return Err(Error::Disconnected);
            }
            let route: Vec<Point> = if k == 0 {
                (1..=2 * d as i64).map(|x| Point::axis(d, 0, x)).collect()
            } else {
                let limit = (d as i64) << (k + 1);
                let mut r = Vec::new();
                let mut i = 1u64;
                loop {
                    let p = v_sequence(&set.start, i)?;
                    if p.get(0) > limit {
                        break;
                    }
                    r.push(p);
                    i += 1;
                }
                r
            };
            let push = |p: Point, cur: &mut Point, path: &mut Vec<Point>| -> Result<()> {
                let e = EdgeId::new(*cur, p)?;
                if !set.contains(&e) {
                    return Err(Error::Disconnected);
                }
                path.push(p);
                *cur = p;
                Ok(())
            };
            for p in route {
                push(p, &mut cur, &mut path)?;
            }
            if let Some(&bits) = leaf.get(k) {
                for c in 0..d - 1 {
                    if bits >> c & 1 == 1 {
                        let p = cur.step(c + 1, 1);
                        push(p, &mut cur, &mut path)?;
                    }
                }
            }
        }
        Ok(path)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn passed(&self) -> bool {
        *self == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiConditions {
    pub xi1: Status,
    pub xi2: Status,
    pub xi3: Status,
    pub xi4: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelCount {
    pub level: usize,
    pub sets: usize,
    pub max_edges: usize,
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiCounts {
    pub sets: usize,
    pub edges: usize,
    pub leaves: usize,
    pub levels: Vec<LevelCount>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiReport {
    pub d: usize,
    pub m: i64,
    pub n: u32,
    pub conditions: XiConditions,
    pub counts: XiCounts,
    /// First few human-readable violations, empty when everything passes.
    pub violations: Vec<String>,
}

impl XiReport {
    pub fn all_pass(&self) -> bool {
        let c = &self.conditions;
        c.xi1.passed() && c.xi2.passed() && c.xi3.passed() && c.xi4.passed()
    }
}

const MAX_REPORTED: usize = 16;

/// Checks the four structural conditions exhaustively.
pub fn verify_conditions(family: &XiFamily) -> XiReport {
    let d = family.d;
    let m = family.m;
    let mut violations = Vec::new();
    let note = |v: &mut Vec<String>, s: String| {
        if v.len() < MAX_REPORTED {
            v.push(s);
        }
    };

    // (1) disjointness
    let mut owner: HashMap<EdgeId, usize> = HashMap::new();
    let mut xi1 = true;
    for (si, set) in family.sets.iter().enumerate() {
        for e in &set.edges {
            if let Some(&prev) = owner.get(e) {
                if prev != si {
                    xi1 = false;
                    let a = &family.sets[prev];
                    note(
                        &mut violations,
                        format!("xi1: {e:?} in {:?}/{} and {:?}/{}", a.index, a.level, set.index, set.level),
                    );
                }
            } else {
                owner.insert(*e, si);
            }
        }
    }

    // (2) containment in [0, m/3] x [0, m/2]^{d-1}, compared exactly
    let inside = |p: &Point| {
        let x = p.get(0);
        x >= 0 && 3 * x <= m && (1..d).all(|c| p.get(c) >= 0 && 2 * p.get(c) <= m)
    };
    let mut xi2 = true;
    for set in &family.sets {
        for e in &set.edges {
            if !inside(&e.lower()) || !inside(&e.upper()) {
                xi2 = false;
                note(&mut violations, format!("xi2: {e:?} of {:?} leaves the slab", set.index));
            }
        }
    }

    // (3) size bounds
    let mut xi3 = true;
    let mut levels: Vec<LevelCount> = Vec::new();
    for set in &family.sets {
        let bound = 1u64.checked_shl((set.level + d + 1) as u32).unwrap_or(u64::MAX);
        if set.len() as u64 > bound {
            xi3 = false;
            note(&mut violations, format!("xi3: {:?} has {} edges > {bound}", set.index, set.len()));
        }
        match levels.iter_mut().find(|l| l.level == set.level) {
            Some(l) => {
                l.sets += 1;
                l.max_edges = l.max_edges.max(set.len());
            }
            None => levels.push(LevelCount { level: set.level, sets: 1, max_edges: set.len(), bound }),
        }
    }
    levels.sort_by_key(|l| l.level);

    // (4) explicit assembly plus a graph search in the chain's union
    let mut xi4 = true;
    let mut leaves = 0usize;
    for leaf in family.leaves() {
        leaves += 1;
        let target = family.leaf_target(&leaf);
        match family.assemble_path(&leaf) {
            Ok(path) if path.last() == Some(&target) => {}
            Ok(path) => {
                xi4 = false;
                note(
                    &mut violations,
                    format!("xi4: leaf {leaf:?} route ends at {} not {target}", path.last().expect("nonempty")),
                );
            }
            Err(e) => {
                xi4 = false;
                note(&mut violations, format!("xi4: leaf {leaf:?} route breaks: {e}"));
            }
        }
        let reachable = family
            .chain(&leaf)
            .map(|chain| connects(chain.iter().flat_map(|s| s.edges.iter().copied()), Point::origin(d), target))
            .unwrap_or(false);
        if !reachable {
            xi4 = false;
            note(&mut violations, format!("xi4: leaf {leaf:?} target {target} unreachable in the union"));
        }
    }

    XiReport {
        d,
        m,
        n: family.n,
        conditions: XiConditions {
            xi1: Status::of(xi1),
            xi2: Status::of(xi2),
            xi3: Status::of(xi3),
            xi4: Status::of(xi4),
        },
        counts: XiCounts { sets: family.sets.len(), edges: family.sets.iter().map(XiSet::len).sum(), leaves, levels },
        violations,
    }
}

fn connects(edges: impl Iterator<Item = EdgeId>, from: Point, to: Point) -> bool {
    let mut adj: HashMap<Point, Vec<Point>> = HashMap::new();
    for e in edges {
        let [a, b] = e.endpoints();
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut seen = HashSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(p) = queue.pop_front() {
        if p == to {
            return true;
        }
        for q in adj.get(&p).into_iter().flatten() {
            if seen.insert(*q) {
                queue.push_back(*q);
            }
        }
    }
    false
}

/// `G_n = {sum_{j<=n} 2^{n-j+1} i_j}` in lexicographic order. Each element is
/// a transverse vector of length `d - 1`.
pub fn leaf_grid(d: usize, n: u32) -> Result<Vec<Vec<i64>>> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::Dimension(d));
    }
    if (d as u32 - 1) * n > MAX_LEAF_BITS {
        return Err(Error::ResourceCap(format!("G_n with d={d}, n={n} is too large")));
    }
    let side = 1i64 << n;
    let count = 1usize << ((d - 1) * n as usize);
    Ok((0..count)
        .map(|mut code| {
            let mut v = vec![0i64; d - 1];
            for slot in v.iter_mut().rev() {
                *slot = 2 * (code as i64 % side);
                code /= side as usize;
            }
            v
        })
        .collect())
}

/// `V_0` and the level sums `V_1..V_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VSums {
    pub v: Vec<f64>,
}

impl VSums {
    /// `sum_k 2^{-(d-1)k} V_k`, the mean route cost under a uniform leaf.
    pub fn weighted_total(&self, d: usize) -> f64 {
        self.v.iter().enumerate().map(|(k, v)| v * 0.5f64.powi(((d - 1) * k) as i32)).sum()
    }
}

pub fn v_sums(cfg: &WeightConfig, family: &XiFamily) -> VSums {
    let mut v = vec![0.0; family.n as usize + 1];
    for set in &family.sets {
        v[set.level] += set.edges.iter().map(|e| cfg.weight(e)).sum::<f64>();
    }
    VSums { v }
}

/// The straight segment `gamma_vbar` from `(d 2^n, vbar)` to `(m - d 2^n, vbar)`,
/// where `d = vbar.len() + 1`.
pub fn straight_segment(vbar: &[i64], m: i64, n: u32) -> Result<Vec<EdgeId>> {
    let d = vbar.len() + 1;
    if d > MAX_DIM {
        return Err(Error::Dimension(d));
    }
    let top = 1i64
        .checked_shl(n + 1)
        .filter(|v| *v > 0)
        .ok_or_else(|| Error::InvalidParameter(format!("n={n} too large")))?;
    if vbar.iter().any(|&c| c < 0 || c % 2 != 0 || c > top - 2) {
        return Err(Error::InvalidParameter(format!("{vbar:?} is not in G_{n}")));
    }
    let a = (d as i64).checked_mul(top / 2).ok_or_else(|| Error::InvalidParameter("segment start overflows".into()))?;
    if m - 2 * a < 0 {
        return Err(Error::Precondition(format!("m - d 2^(n+1) = {} < 0", m - 2 * a)));
    }
    Ok((a..m - a).map(|x| EdgeId::along(with_height(d, x, vbar), 0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::DistributionSpec;

    fn p(c: &[i64]) -> Point {
        Point::from_slice(c)
    }

    fn fam(d: usize, m: i64) -> XiFamily {
        build_xi(d, m).unwrap().into_family().unwrap()
    }

    #[test]
    fn v_sequence_base_and_flat() {
        let v = p(&[3, 2, 1]);
        assert_eq!(v_sequence(&v, 0).unwrap(), v);
        let flat = p(&[4, 0, 0]);
        for i in 0..20 {
            assert_eq!(v_sequence(&flat, i).unwrap(), p(&[4 + i as i64, 0, 0]));
        }
        assert!(v_sequence(&p(&[0, -1]), 1).is_err());
    }

    #[test]
    fn v_sequence_doubles_then_runs() {
        let v = p(&[0, 2, 1]);
        let seq: Vec<Point> = (0..9).map(|i| v_sequence(&v, i).unwrap()).collect();
        // i <= 4 moves axes 0 and 1, i <= 6 axes 0 and 2, then axis 0 only
        assert_eq!(seq[4], p(&[2, 4, 1]));
        assert_eq!(seq[6], p(&[3, 4, 2]));
        assert_eq!(seq[8], p(&[5, 4, 2]));
        for w in seq.windows(2) {
            assert!(w[0].is_adjacent(&w[1]));
        }
    }

    #[test]
    fn norm_grows_by_one_per_step() {
        let mut h = 0x1234_5678u64;
        for _ in 0..200 {
            h = crate::weights::prf::mix64(h);
            let c: Vec<i64> = (0..3).map(|s| ((h >> (8 * s)) % 9) as i64).collect();
            let v = Point::new(&c).unwrap();
            for i in 0..=50u64 {
                assert_eq!(v_sequence(&v, i).unwrap().norm1() - v.norm1(), i as i64);
            }
        }
    }

    #[test]
    fn depth_examples() {
        assert_eq!(depth(2, 49), Some(2));
        assert_eq!(depth(2, 48), Some(2));
        assert_eq!(depth(2, 47), Some(1));
        assert_eq!(depth(3, 100), Some(2));
        assert_eq!(depth(2, 11), None);
    }

    #[test]
    fn planar_family_shape() {
        let f = fam(2, 49);
        assert_eq!(f.n, 2);
        assert_eq!(f.sets.len(), 7);
        assert_eq!(f.level(1).count(), 2);
        assert_eq!(f.level(2).count(), 4);
        // straight run 0 -> (4,0) plus one transverse edge
        assert_eq!(f.root().len(), 5);
        assert!(f.root().len() <= 1 << 3);
    }

    #[test]
    fn small_m_is_degenerate() {
        match build_xi(2, 24).unwrap() {
            XiConstruction::Degenerate { straight, .. } => assert_eq!(straight.len(), 24),
            other => panic!("expected degenerate, got {other:?}"),
        }
        assert!(build_xi(2, 25).unwrap().family().is_some());
    }

    #[test]
    fn conditions_hold_on_examples() {
        for (d, m) in [(2, 49), (3, 100), (2, 200), (3, 37), (1, 40), (4, 49 * 4)] {
            let r = verify_conditions(&fam(d, m));
            assert!(r.all_pass(), "d={d} m={m}: {:?}", r.violations);
        }
    }

    #[test]
    fn merged_sets_break_disjointness() {
        let mut f = fam(2, 49);
        let extra = f.sets[2].edges.clone();
        f.sets[1].edges.extend(extra);
        f.sets[1].edges.sort_unstable();
        let r = verify_conditions(&f);
        assert_eq!(r.conditions.xi1, Status::Fail);
        assert_eq!(r.conditions.xi2, Status::Pass);
    }

    #[test]
    fn removed_edge_breaks_connectivity() {
        let mut f = fam(2, 49);
        f.sets[3].edges.remove(0);
        assert_eq!(verify_conditions(&f).conditions.xi4, Status::Fail);
    }

    #[test]
    fn leaf_grid_matches_targets() {
        let f = fam(3, 100);
        let grid = leaf_grid(3, f.n).unwrap();
        assert_eq!(grid.len(), 1 << (2 * f.n));
        let from_leaves: Vec<Vec<i64>> = f.leaves().map(|l| f.leaf_target(&l).coords()[1..].to_vec()).collect();
        let mut a = grid.clone();
        let mut b = from_leaves;
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn straight_segment_examples() {
        let s = straight_segment(&[2], 49, 2).unwrap();
        assert_eq!(s.len(), 33);
        assert!(s.iter().all(|e| e.lower().get(1) == 2 && e.axis() == 0));
        assert_eq!(s[0].lower(), p(&[8, 2]));
        assert!(straight_segment(&[0], 16, 2).unwrap().is_empty());
        assert!(matches!(straight_segment(&[0], 15, 2), Err(Error::Precondition(_))));
        assert!(straight_segment(&[1], 49, 2).is_err());
    }

    #[test]
    fn v_sums_constant_and_zero() {
        let f = fam(2, 100);
        let one = WeightConfig::new(DistributionSpec::Constant { v: 1.0 }, 0).unwrap();
        let zero = WeightConfig::new(DistributionSpec::Constant { v: 0.0 }, 0).unwrap();
        let s = v_sums(&one, &f);
        for k in 0..=f.n as usize {
            let count: usize = f.level(k).map(XiSet::len).sum();
            assert_eq!(s.v[k], count as f64);
        }
        assert!(v_sums(&zero, &f).v.iter().all(|v| *v == 0.0));
    }
}
