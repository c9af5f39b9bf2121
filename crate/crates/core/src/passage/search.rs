//! Incremental Dijkstra over the vertices of a finite region.

use super::radix::RadixHeap;
use crate::error::{Error, Result};
use crate::lattice::{EdgeId, Point, Region};

/// Largest region a single search may index.
pub const MAX_SEARCH_VERTICES: usize = 1 << 27;

pub(crate) const UNSETTLED: u32 = u32::MAX;
const INF_BITS: u64 = 0x7ff0_0000_0000_0000;

/// Dijkstra with lazy deletion.
///
/// Vertices are settled one at a time in nondecreasing label order, so
/// callers can stop as soon as they have what they need. The weight closure
/// returns `f64::INFINITY` for edges that should be treated as absent.
pub(crate) struct Search<'r, W> {
    region: &'r Region,
    weight: W,
    // label as `bits ^ INF_BITS` in the low word and `rank + 1` above it, so
    // the unset state is all zeros (untouched pages are never faulted in) and
    // a relaxation touches one cache line
    slot: Vec<u128>,
    origin: Option<Vec<u32>>,
    heap: RadixHeap,
    order: Vec<u32>,
    settled: u32,
    first_boundary: f64,
}

impl<'r, W: Fn(&EdgeId) -> f64> Search<'r, W> {
    pub fn new(region: &'r Region, weight: W) -> Result<Self> {
        let n = region.len().ok_or(Error::InfiniteRegion)?;
        if n > MAX_SEARCH_VERTICES {
            return Err(Error::ResourceCap(format!(
                "search region has {n} vertices, the cap is {MAX_SEARCH_VERTICES}"
            )));
        }
        Ok(Search {
            region,
            weight,
            slot: vec![0; n],
            origin: None,
            heap: RadixHeap::new(),
            order: Vec::new(),
            settled: 0,
            first_boundary: f64::INFINITY,
        })
    }

    /// Records, for every labelled vertex, which source its label came from.
    pub fn track_origin(&mut self) {
        self.origin = Some(vec![UNSETTLED; self.slot.len()]);
    }

    pub fn region(&self) -> &Region {
        self.region
    }

    pub fn add_source(&mut self, p: &Point) -> Result<u32> {
        let i = self.region.index_of(p).ok_or_else(|| Error::OutsideRegion(p.to_string()))? as u32;
        self.add_index(i);
        Ok(i)
    }

    /// Adds the vertex with region index `i` as a source. Must be called
    /// before anything is settled.
    pub fn add_index(&mut self, i: u32) {
        if self.dist(i) > 0.0 {
            self.set_dist(i as usize, 0.0);
            if let Some(o) = self.origin.as_mut() {
                o[i as usize] = i;
            }
            self.heap.push(0f64.to_bits(), i);
        }
    }

    #[inline]
    pub fn dist(&self, i: u32) -> f64 {
        f64::from_bits(self.slot[i as usize] as u64 ^ INF_BITS)
    }

    #[inline]
    fn set_dist(&mut self, i: usize, d: f64) {
        self.slot[i] = (self.slot[i] >> 64 << 64) | (d.to_bits() ^ INF_BITS) as u128;
    }

    #[inline]
    pub fn is_settled(&self, i: u32) -> bool {
        self.slot[i as usize] >> 64 != 0
    }

    #[inline]
    /// Settle position, `UNSETTLED` for vertices not settled yet.
    pub fn rank(&self, i: u32) -> u32 {
        ((self.slot[i as usize] >> 64) as u32).wrapping_sub(1)
    }

    pub fn origin(&self, i: u32) -> Option<u32> {
        self.origin.as_ref().map(|o| o[i as usize]).filter(|&o| o != UNSETTLED)
    }

    /// Settled vertices in settle order.
    pub fn settled_vertices(&self) -> &[u32] {
        &self.order
    }

    pub fn settled_count(&self) -> u32 {
        self.settled
    }

    /// Label of the first settled vertex that has a neighbour outside the
    /// region; infinity if none has been settled yet.
    pub fn first_boundary_label(&self) -> f64 {
        self.first_boundary
    }

    #[inline]
    pub fn weight(&self, e: &EdgeId) -> f64 {
        (self.weight)(e)
    }

    /// Smallest tentative label still in the queue.
    pub fn peek(&mut self) -> Option<f64> {
        while let Some((bits, i)) = self.heap.peek() {
            if self.slot[i as usize] >> 64 != 0 {
                self.heap.pop();
            } else {
                return Some(f64::from_bits(bits));
            }
        }
        None
    }

    /// Settles the next vertex and relaxes its edges.
    pub fn settle_next(&mut self) -> Option<(u32, f64)> {
        self.settle_next_with(|_, _| {})
    }

    /// [`Search::settle_next`], calling `improved(j, label)` whenever the
    /// tentative label of `j` drops.
    pub fn settle_next_with(&mut self, mut improved: impl FnMut(u32, f64)) -> Option<(u32, f64)> {
        while let Some((bits, i)) = self.heap.pop() {
            let iu = i as usize;
            if self.slot[iu] >> 64 != 0 {
                continue;
            }
            let d = f64::from_bits(bits);
            self.settled += 1;
            self.slot[iu] |= (self.settled as u128) << 64;
            self.order.push(i);
            let p = self.region.point_at(iu);
            let mut boundary = false;
            for_each_neighbour(self.region, iu, &p, |j, axis, sign| match j {
                None => boundary = true,
                Some(j) => {
                    let s = self.slot[j];
                    if s >> 64 != 0 {
                        return;
                    }
                    let w = (self.weight)(&EdgeId::from_step(p, axis, sign));
                    if !w.is_finite() {
                        return;
                    }
                    let nd = d + w;
                    if nd < f64::from_bits(s as u64 ^ INF_BITS) {
                        self.slot[j] = (nd.to_bits() ^ INF_BITS) as u128;
                        if let Some(o) = self.origin.as_mut() {
                            o[j] = o[iu];
                        }
                        self.heap.push(nd.to_bits(), j as u32);
                        improved(j as u32, nd);
                    }
                }
            });
            if boundary && self.first_boundary.is_infinite() {
                self.first_boundary = d;
            }
            return Some((i, d));
        }
        None
    }

    /// Settles everything with label `<= bound`.
    pub fn run_through(&mut self, bound: f64) {
        while let Some(m) = self.peek() {
            if m > bound {
                break;
            }
            self.settle_next();
        }
    }

    /// Settles everything reachable.
    #[cfg(test)]
    pub fn run_all(&mut self) {
        while self.settle_next().is_some() {}
    }

    /// Runs until `target` is settled and returns its label.
    pub fn run_to(&mut self, target: u32) -> Option<f64> {
        while !self.is_settled(target) {
            self.settle_next()?;
        }
        Some(self.dist(target))
    }
}

/// Calls `f(Some(index) | None, axis, sign)` for the 2d lattice neighbours of
/// vertex `i` (at point `p`); `None` marks a neighbour outside the region.
#[inline]
pub(crate) fn for_each_neighbour(region: &Region, i: usize, p: &Point, mut f: impl FnMut(Option<usize>, usize, i64)) {
    match region {
        Region::Box(b) => {
            let (lo, hi) = (b.lo(), b.hi());
            for axis in 0..p.dim() {
                let s = b.stride(axis);
                let c = p.get(axis);
                f(if c > lo.get(axis) { Some(i - s) } else { None }, axis, -1);
                f(if c < hi.get(axis) { Some(i + s) } else { None }, axis, 1);
            }
        }
        _ => {
            for axis in 0..p.dim() {
                for sign in [-1, 1] {
                    f(region.index_of(&p.step(axis, sign)), axis, sign);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_weights_give_l1_distance() {
        let r = Region::boxed(Point::from_slice(&[-3, -3]), Point::from_slice(&[3, 3])).unwrap();
        let mut s = Search::new(&r, |_: &EdgeId| 1.0).unwrap();
        s.add_source(&Point::from_slice(&[0, 0])).unwrap();
        s.run_all();
        for i in 0..r.len().unwrap() {
            assert_eq!(s.dist(i as u32), r.point_at(i).norm1() as f64);
        }
        assert_eq!(s.first_boundary_label(), 3.0);
    }

    #[test]
    fn settle_ranks_follow_labels() {
        let r = Region::boxed(Point::from_slice(&[0, 0]), Point::from_slice(&[5, 5])).unwrap();
        let w = |e: &EdgeId| (e.lower().get(0) * 3 + e.lower().get(1) + e.axis() as i64) as f64 % 4.0;
        let mut s = Search::new(&r, w).unwrap();
        s.add_source(&Point::from_slice(&[2, 2])).unwrap();
        s.run_all();
        let mut by_rank: Vec<u32> = (0..36).collect();
        by_rank.sort_by_key(|&i| s.rank(i));
        for pair in by_rank.windows(2) {
            assert!(s.dist(pair[0]) <= s.dist(pair[1]));
        }
    }

    #[test]
    fn infinite_weights_are_absent_edges() {
        let r = Region::boxed(Point::from_slice(&[0]), Point::from_slice(&[4])).unwrap();
        let mut s = Search::new(&r, |e: &EdgeId| if e.lower().get(0) == 2 { f64::INFINITY } else { 1.0 }).unwrap();
        s.add_source(&Point::from_slice(&[0])).unwrap();
        s.run_all();
        assert_eq!(s.dist(2), 2.0);
        assert!(s.dist(3).is_infinite());
    }

    #[test]
    fn full_region_is_rejected() {
        let r = Region::full(2).unwrap();
        assert!(matches!(Search::new(&r, |_: &EdgeId| 1.0), Err(Error::InfiniteRegion)));
    }
}
