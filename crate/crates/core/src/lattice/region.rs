use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use super::point::{Point, MAX_DIM};
use crate::error::{Error, Result};

/// Coordinates are kept well inside the i64 range so that neighbour steps
/// and box arithmetic can never wrap.
pub const COORD_LIMIT: i64 = 1 << 60;

/// A closed axis-parallel box `[lo_1,hi_1] x ... x [lo_d,hi_d]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoxRegion {
    lo: Point,
    hi: Point,
    strides: [usize; MAX_DIM],
    len: usize,
}

impl BoxRegion {
    pub fn new(lo: Point, hi: Point) -> Result<Self> {
        if lo.dim() != hi.dim() {
            return Err(Error::DimensionMismatch { expected: lo.dim(), got: hi.dim() });
        }
        let d = lo.dim();
        let mut strides = [0usize; MAX_DIM];
        let mut len: usize = 1;
        for i in (0..d).rev() {
            let (a, b) = (lo.get(i), hi.get(i));
            if a.abs() >= COORD_LIMIT || b.abs() >= COORD_LIMIT {
                return Err(Error::InvalidParameter(format!("box corner coordinate exceeds +-2^60 on axis {i}")));
            }
            if a > b {
                return Err(Error::InvalidParameter(format!("empty box: lo {lo} > hi {hi} on axis {i}")));
            }
            strides[i] = len;
            let side = usize::try_from(b - a + 1)
                .map_err(|_| Error::InvalidParameter(format!("box side on axis {i} does not fit in usize")))?;
            len = len.checked_mul(side).ok_or_else(|| {
                Error::InvalidParameter(format!("box [{lo},{hi}] has more vertices than usize holds"))
            })?;
        }
        Ok(BoxRegion { lo, hi, strides, len })
    }

    /// The cube `[-r, r]^d` centred at `c`.
    pub fn centered(c: Point, r: i64) -> Result<Self> {
        let d = c.dim();
        let mut lo = c;
        let mut hi = c;
        for i in 0..d {
            lo.set(i, c.get(i) - r);
            hi.set(i, c.get(i) + r);
        }
        Self::new(lo, hi)
    }

    /// The cube `[0, k]^d`.
    pub fn cube(dim: usize, k: i64) -> Result<Self> {
        let lo = Point::origin(dim);
        let mut hi = lo;
        for i in 0..dim {
            hi.set(i, k);
        }
        Self::new(lo, hi)
    }

    pub fn lo(&self) -> Point {
        self.lo
    }

    pub fn hi(&self) -> Point {
        self.hi
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of vertices along `axis`.
    pub fn side(&self, axis: usize) -> i64 {
        self.hi.get(axis) - self.lo.get(axis) + 1
    }

    #[inline]
    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim() && (0..self.dim()).all(|i| self.lo.get(i) <= p.get(i) && p.get(i) <= self.hi.get(i))
    }

    #[inline]
    pub fn index_of(&self, p: &Point) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        let mut idx = 0;
        for i in 0..self.dim() {
            idx += (p.get(i) - self.lo.get(i)) as usize * self.strides[i];
        }
        Some(idx)
    }

    #[inline]
    pub fn point_at(&self, mut idx: usize) -> Point {
        debug_assert!(idx < self.len);
        let mut p = self.lo;
        for i in 0..self.dim() {
            let q = idx / self.strides[i];
            idx -= q * self.strides[i];
            p.set(i, self.lo.get(i) + q as i64);
        }
        p
    }

    #[inline]
    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    /// Vertices in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len).map(move |i| self.point_at(i))
    }

    pub fn is_on_boundary(&self, p: &Point) -> bool {
        self.contains(p) && (0..self.dim()).any(|i| p.get(i) == self.lo.get(i) || p.get(i) == self.hi.get(i))
    }

    pub fn contains_box(&self, other: &BoxRegion) -> bool {
        self.contains(&other.lo) && self.contains(&other.hi)
    }

    pub fn intersect(&self, other: &BoxRegion) -> Option<BoxRegion> {
        let d = self.dim();
        let mut lo = self.lo;
        let mut hi = self.hi;
        for i in 0..d {
            lo.set(i, self.lo.get(i).max(other.lo.get(i)));
            hi.set(i, self.hi.get(i).min(other.hi.get(i)));
            if lo.get(i) > hi.get(i) {
                return None;
            }
        }
        BoxRegion::new(lo, hi).ok()
    }

    /// The box grown by `r` on every side.
    pub fn expand(&self, r: i64) -> Result<BoxRegion> {
        let mut lo = self.lo;
        let mut hi = self.hi;
        for i in 0..self.dim() {
            lo.set(i, self.lo.get(i) - r);
            hi.set(i, self.hi.get(i) + r);
        }
        BoxRegion::new(lo, hi)
    }
}

/// A finite explicit vertex set with a dense index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetRegion {
    dim: usize,
    points: Vec<Point>,
    index: HashMap<Point, u32>,
}

impl SetRegion {
    pub fn new(dim: usize, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Dimension(dim));
        }
        let mut pts: Vec<Point> = points.into_iter().collect();
        for p in &pts {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
            }
            if p.coords().iter().any(|c| c.abs() >= COORD_LIMIT) {
                return Err(Error::InvalidParameter(format!("coordinate of {p} exceeds +-2^60")));
            }
        }
        pts.sort_unstable();
        pts.dedup();
        if pts.len() > u32::MAX as usize {
            return Err(Error::InvalidParameter("explicit region too large".into()));
        }
        let index = pts.iter().enumerate().map(|(i, p)| (*p, i as u32)).collect();
        Ok(SetRegion { dim, points: pts, index })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }

    pub fn point_at(&self, i: usize) -> Point {
        self.points[i]
    }

    /// Sorted vertices.
    pub fn points(&self) -> &[Point] {
        &self.points
    }
}

/// A vertex region of Z^d.
///
/// Cloning is cheap: explicit sets are shared.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    Box(BoxRegion),
    Set(Arc<SetRegion>),
    /// The whole lattice. Only membership is available; any algorithm that
    /// needs to enumerate vertices requires a finite envelope instead.
    Full(usize),
}

impl Region {
    pub fn boxed(lo: Point, hi: Point) -> Result<Self> {
        Ok(Region::Box(BoxRegion::new(lo, hi)?))
    }

    pub fn set(dim: usize, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        Ok(Region::Set(Arc::new(SetRegion::new(dim, points)?)))
    }

    pub fn full(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Dimension(dim));
        }
        Ok(Region::Full(dim))
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::Box(b) => b.dim(),
            Region::Set(s) => s.dim(),
            Region::Full(d) => *d,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, Region::Full(_))
    }

    #[inline]
    pub fn contains(&self, p: &Point) -> bool {
        match self {
            Region::Box(b) => b.contains(p),
            Region::Set(s) => s.contains(p),
            Region::Full(d) => p.dim() == *d,
        }
    }

    /// Vertex count; `None` for the full lattice.
    pub fn len(&self) -> Option<usize> {
        match self {
            Region::Box(b) => Some(b.len()),
            Region::Set(s) => Some(s.len()),
            Region::Full(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    #[inline]
    pub fn index_of(&self, p: &Point) -> Option<usize> {
        match self {
            Region::Box(b) => b.index_of(p),
            Region::Set(s) => s.index_of(p),
            Region::Full(_) => None,
        }
    }

    #[inline]
    pub fn point_at(&self, i: usize) -> Point {
        match self {
            Region::Box(b) => b.point_at(i),
            Region::Set(s) => s.point_at(i),
            Region::Full(_) => panic!("the full lattice has no vertex index"),
        }
    }

    /// All vertices in lexicographic order.
    pub fn vertices(&self) -> Result<Vec<Point>> {
        match self {
            Region::Box(b) => Ok(b.iter().collect()),
            Region::Set(s) => Ok(s.points().to_vec()),
            Region::Full(_) => Err(Error::InfiniteRegion),
        }
    }

    pub fn as_box(&self) -> Option<&BoxRegion> {
        match self {
            Region::Box(b) => Some(b),
            _ => None,
        }
    }

    /// The smallest box containing the region.
    pub fn bounding_box(&self) -> Result<BoxRegion> {
        match self {
            Region::Box(b) => Ok(b.clone()),
            Region::Set(s) => {
                let pts = s.points();
                let first = *pts.first().ok_or_else(|| Error::InvalidParameter("empty region".into()))?;
                let mut lo = first;
                let mut hi = first;
                for p in pts {
                    for i in 0..s.dim() {
                        lo.set(i, lo.get(i).min(p.get(i)));
                        hi.set(i, hi.get(i).max(p.get(i)));
                    }
                }
                BoxRegion::new(lo, hi)
            }
            Region::Full(_) => Err(Error::InfiniteRegion),
        }
    }

    /// Inner boundary: vertices of the region with a neighbour outside it.
    pub fn boundary(&self) -> Result<Vec<Point>> {
        match self {
            Region::Box(b) => Ok(b.iter().filter(|p| b.is_on_boundary(p)).collect()),
            Region::Set(s) => {
                Ok(s.points().iter().copied().filter(|p| p.neighbours().any(|q| !s.contains(&q))).collect())
            }
            Region::Full(_) => Err(Error::InfiniteRegion),
        }
    }

    /// The region minus its inner boundary.
    pub fn interior(&self) -> Result<Region> {
        match self {
            Region::Box(b) => {
                let d = b.dim();
                if (0..d).all(|i| b.side(i) >= 3) {
                    Ok(Region::Box(b.expand(-1)?))
                } else {
                    Region::set(d, std::iter::empty())
                }
            }
            Region::Set(s) => {
                Region::set(s.dim(), s.points().iter().copied().filter(|p| p.neighbours().all(|q| s.contains(&q))))
            }
            Region::Full(_) => Err(Error::InfiniteRegion),
        }
    }

    /// `Conn(x, D)`: the nearest-neighbour component of the region containing `x`,
    /// sorted lexicographically.
    pub fn connected_component(&self, x: &Point) -> Result<Vec<Point>> {
        if !self.is_finite() {
            return Err(Error::InfiniteRegion);
        }
        if !self.contains(x) {
            return Err(Error::OutsideRegion(x.to_string()));
        }
        let n = self.len().unwrap_or(0);
        let mut seen = vec![false; n];
        let start = self.index_of(x).expect("member has an index");
        seen[start] = true;
        let mut queue = VecDeque::from([*x]);
        let mut out = Vec::new();
        while let Some(p) = queue.pop_front() {
            out.push(p);
            for q in p.neighbours() {
                if let Some(j) = self.index_of(&q) {
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(q);
                    }
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

impl From<BoxRegion> for Region {
    fn from(b: BoxRegion) -> Self {
        Region::Box(b)
    }
}
