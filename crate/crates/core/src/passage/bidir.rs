//! Two-sided search: a ball grown from the sources and one grown from the
//! targets, alternately, until their labels certify the distance.

use super::backtrack;
use super::search::Search;
use crate::error::Result;
use crate::lattice::{EdgeId, Region};

pub(crate) struct Meet<'r, W> {
    pub fwd: Search<'r, W>,
    pub bwd: Search<'r, W>,
    /// Distance between the terminal sets, `+inf` when disconnected.
    pub time: f64,
    /// Vertex on an optimal path with `fwd.dist + bwd.dist == time`.
    pub at: Option<u32>,
    /// Lower bound on the cost of any terminal-to-terminal path through a
    /// vertex with a neighbour outside the region.
    pub exit_bound: f64,
}

/// Grows both balls, always extending the one with the smaller frontier,
/// and stops once the two frontiers sum to at least the best connection
/// seen. Connections are recorded whenever a label improves, which covers
/// every scanned edge.
pub(crate) fn meet<'r, W>(weight: W, region: &'r Region, sources: &[u32], targets: &[u32]) -> Result<Meet<'r, W>>
where
    W: Fn(&EdgeId) -> f64 + Copy,
{
    let mut fwd = Search::new(region, weight)?;
    let mut bwd = Search::new(region, weight)?;
    for &i in sources {
        fwd.add_index(i);
    }
    let mut best = f64::INFINITY;
    let mut at = None;
    for &i in targets {
        bwd.add_index(i);
        if fwd.dist(i) == 0.0 {
            best = 0.0;
            at = Some(i);
        }
    }
    let (pf, pb) = loop {
        let pf = fwd.peek().unwrap_or(f64::INFINITY);
        let pb = bwd.peek().unwrap_or(f64::INFINITY);
        if pf + pb >= best {
            break (pf, pb);
        }
        if pf <= pb {
            fwd.settle_next_with(|j, d| {
                let s = d + bwd.dist(j);
                if s < best {
                    best = s;
                    at = Some(j);
                }
            });
        } else {
            bwd.settle_next_with(|j, d| {
                let s = d + fwd.dist(j);
                if s < best {
                    best = s;
                    at = Some(j);
                }
            });
        }
    };
    let exit_bound = fwd.first_boundary_label().min(pf) + bwd.first_boundary_label().min(pb);
    let mut m = Meet { fwd, bwd, time: best, at, exit_bound };
    m.time = m.canonical_time();
    Ok(m)
}

impl<W: Fn(&EdgeId) -> f64> Meet<'_, W> {
    /// Re-sums the optimal path through `at` from the source end, so the
    /// value matches a one-sided search bit for bit when the path is unique.
    fn canonical_time(&self) -> f64 {
        let Some(at) = self.at else { return self.time };
        let mut t = self.fwd.dist(at);
        let tail = backtrack(&self.bwd, at);
        for w in tail.windows(2).rev() {
            t += self.bwd.weight(&EdgeId::new(w[1], w[0]).expect("backtrack yields adjacent vertices"));
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Point;
    use crate::weights::{DistributionSpec, WeightConfig};

    #[test]
    fn matches_one_sided_search_exactly() {
        let region = Region::boxed(Point::from_slice(&[-10, -10]), Point::from_slice(&[10, 10])).unwrap();
        for seed in 0..30 {
            let cfg = WeightConfig::new(DistributionSpec::Exponential { rate: 1.0 }, seed).unwrap();
            let w = |e: &EdgeId| cfg.weight(e);
            let v = region.index_of(&Point::from_slice(&[-3, 1])).unwrap() as u32;
            let u = region.index_of(&Point::from_slice(&[7, -4])).unwrap() as u32;
            let mut one = Search::new(&region, &w).unwrap();
            one.add_index(v);
            let expect = one.run_to(u).unwrap();
            let m = meet(&w, &region, &[v], &[u]).unwrap();
            assert_eq!(m.time, expect);
        }
    }

    #[test]
    fn exit_bound_is_a_lower_bound() {
        let region = Region::boxed(Point::from_slice(&[0, 0]), Point::from_slice(&[8, 4])).unwrap();
        let w = |_: &EdgeId| 1.0;
        let v = region.index_of(&Point::from_slice(&[1, 2])).unwrap() as u32;
        let u = region.index_of(&Point::from_slice(&[7, 2])).unwrap() as u32;
        let m = meet(&w, &region, &[v], &[u]).unwrap();
        assert_eq!(m.time, 6.0);
        // through (0, 2) the cost is 1 + 7
        assert!(m.exit_bound <= 8.0);
        let wide = Region::boxed(Point::from_slice(&[-20, -20]), Point::from_slice(&[20, 20])).unwrap();
        let v = wide.index_of(&Point::from_slice(&[0, 0])).unwrap() as u32;
        let u = wide.index_of(&Point::from_slice(&[3, 0])).unwrap() as u32;
        let m = meet(&w, &wide, &[v], &[u]).unwrap();
        assert!(m.exit_bound >= m.time);
    }

    #[test]
    fn disconnected_and_coincident_terminals() {
        let region = Region::set(1, [Point::from_slice(&[0]), Point::from_slice(&[2])]).unwrap();
        let w = |_: &EdgeId| 1.0;
        assert!(meet(&w, &region, &[0], &[1]).unwrap().time.is_infinite());
        assert_eq!(meet(&w, &region, &[0], &[0]).unwrap().time, 0.0);
    }
}
