use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{BoxRegion, Point, Region};

/// Geometry of the `n`-cube `S(l;n)`, its enlargement `T(l;n)` and the
/// `n`-box `B^j(l;n) = T(l;n) ∩ T(l + 2 sgn(j) e_|j|; n)`.
///
/// `j` is a signed, one-based axis index in `±1..=±d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxFrame {
    pub l: Point,
    pub n: i64,
    pub j: i8,
}

impl BoxFrame {
    pub fn new(l: Point, n: i64, j: i8) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter(format!("box scale n must be >= 1, got {n}")));
        }
        let d = l.dim() as i8;
        if j == 0 || j.abs() > d {
            return Err(Error::InvalidParameter(format!("box direction must be in ±1..=±{d}, got {j}")));
        }
        let f = BoxFrame { l, n, j };
        // all derived boxes must be representable
        f.t_box_at(&f.l)?;
        f.t_box_at(&f.neighbour_index())?;
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.l.dim()
    }

    /// Zero-based axis of `j`.
    pub fn axis(&self) -> usize {
        self.j.unsigned_abs() as usize - 1
    }

    pub fn sign(&self) -> i64 {
        self.j.signum() as i64
    }

    fn neighbour_index(&self) -> Point {
        self.l.step(self.axis(), 2 * self.sign())
    }

    /// `S(l;n) = {v : n l_i <= v_i < n (l_i + 1)}`.
    pub fn s_box(&self) -> BoxRegion {
        let mut lo = self.l;
        let mut hi = self.l;
        for i in 0..self.dim() {
            lo.set(i, self.n * self.l.get(i));
            hi.set(i, self.n * (self.l.get(i) + 1) - 1);
        }
        BoxRegion::new(lo, hi).expect("validated in new")
    }

    fn t_box_at(&self, l: &Point) -> Result<BoxRegion> {
        let mut lo = *l;
        let mut hi = *l;
        for i in 0..self.dim() {
            let base =
                self.n.checked_mul(l.get(i)).ok_or_else(|| Error::InvalidParameter("box index overflows".into()))?;
            lo.set(i, base - self.n);
            hi.set(i, base + 2 * self.n);
        }
        BoxRegion::new(lo, hi)
    }

    /// `T(l;n) = {v : n l_i - n <= v_i <= n (l_i + 2)}`.
    pub fn t_box(&self) -> BoxRegion {
        self.t_box_at(&self.l).expect("validated in new")
    }

    /// The `n`-box: side `3n` (in lattice units) except `n` along `|j|`.
    pub fn b_box(&self) -> BoxRegion {
        let a = self.t_box();
        let b = self.t_box_at(&self.neighbour_index()).expect("validated in new");
        a.intersect(&b).expect("adjacent enlarged cubes overlap")
    }

    pub fn region(&self) -> Region {
        Region::Box(self.b_box())
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.b_box().contains(p)
    }

    /// `∂B`: vertices of the box with a lattice neighbour outside it.
    pub fn boundary(&self) -> Vec<Point> {
        let b = self.b_box();
        b.iter().filter(|p| b.is_on_boundary(p)).collect()
    }

    pub fn is_on_boundary(&self, p: &Point) -> bool {
        self.b_box().is_on_boundary(p)
    }

    /// `ι(B) = B \ ∂B`.
    pub fn is_interior(&self, p: &Point) -> bool {
        let b = self.b_box();
        b.contains(p) && !b.is_on_boundary(p)
    }

    /// `d_inf(v, B^c)`: the sup-distance to the nearest lattice point outside.
    pub fn dist_to_complement(&self, p: &Point) -> i64 {
        let b = self.b_box();
        if !b.contains(p) {
            return 0;
        }
        (0..self.dim())
            .map(|i| (p.get(i) - b.lo().get(i) + 1).min(b.hi().get(i) - p.get(i) + 1))
            .min()
            .expect("dimension >= 1")
    }

    /// True when the box contains `0` or `N e_1`, the cases excluded by the
    /// box-goodness argument.
    pub fn contains_terminal(&self, big_n: i64) -> bool {
        let d = self.dim();
        self.contains(&Point::origin(d)) || self.contains(&Point::axis(d, 0, big_n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_frame_sizes() {
        let f = BoxFrame::new(Point::origin(2), 6, 1).unwrap();
        assert_eq!(f.s_box().len(), 36);
        let b = f.b_box();
        assert_eq!((b.side(0), b.side(1)), (7, 19));
        assert_eq!(b.lo(), Point::from_slice(&[6, -6]));
        assert!(f.t_box().contains_box(&f.s_box()));
    }

    #[test]
    fn negative_direction_mirrors() {
        let f = BoxFrame::new(Point::from_slice(&[1, 0]), 4, -1).unwrap();
        let b = f.b_box();
        assert_eq!((b.lo().get(0), b.hi().get(0)), (0, 4));
        assert_eq!(b.side(1), 13);
    }

    #[test]
    fn boundary_and_interior_partition() {
        let f = BoxFrame::new(Point::origin(3), 3, 2).unwrap();
        let b = f.b_box();
        let bd = f.boundary();
        let interior = b.iter().filter(|p| f.is_interior(p)).count();
        assert_eq!(bd.len() + interior, b.len());
        assert_eq!(interior, (10 - 2) * (4 - 2) * (10 - 2));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(BoxFrame::new(Point::origin(2), 0, 1).is_err());
        assert!(BoxFrame::new(Point::origin(2), 3, 3).is_err());
        assert!(BoxFrame::new(Point::origin(2), 3, 0).is_err());
    }
}
