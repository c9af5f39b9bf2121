use std::fmt;

use serde::{Deserialize, Serialize};

use super::point::Point;
use crate::error::{Error, Result};

/// Canonical identifier of an undirected nearest-neighbour edge.
///
/// Stored as the lexicographically lower endpoint together with the axis
/// along which the edge runs; the other endpoint is `lower + e_axis`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId {
    lower: Point,
    axis: u8,
}

impl EdgeId {
    /// Builds the canonical id from two endpoints given in either order.
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if !a.is_adjacent(&b) {
            return Err(Error::NotAdjacent { a: a.to_string(), b: b.to_string() });
        }
        let axis = (0..a.dim()).find(|&i| a.get(i) != b.get(i)).expect("adjacent points differ");
        let lower = if a.get(axis) < b.get(axis) { a } else { b };
        Ok(EdgeId { lower, axis: axis as u8 })
    }

    /// The edge `{p, p + e_axis}`.
    #[inline]
    pub fn along(p: Point, axis: usize) -> Self {
        debug_assert!(axis < p.dim());
        EdgeId { lower: p, axis: axis as u8 }
    }

    /// The edge from `p` one step along `axis` in direction `sign` (±1).
    #[inline]
    pub fn from_step(p: Point, axis: usize, sign: i64) -> Self {
        if sign > 0 {
            Self::along(p, axis)
        } else {
            Self::along(p.step(axis, -1), axis)
        }
    }

    #[inline]
    pub fn lower(&self) -> Point {
        self.lower
    }

    #[inline]
    pub fn upper(&self) -> Point {
        self.lower.step(self.axis as usize, 1)
    }

    #[inline]
    pub fn axis(&self) -> usize {
        self.axis as usize
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn endpoints(&self) -> [Point; 2] {
        [self.lower, self.upper()]
    }

    pub fn contains(&self, p: &Point) -> bool {
        *p == self.lower || *p == self.upper()
    }

    /// The endpoint of smaller 1-norm. Adjacent vertices always differ in
    /// 1-norm by exactly one, so this is well defined.
    pub fn v_e(&self) -> Point {
        let (a, b) = (self.lower, self.upper());
        if a.norm1() < b.norm1() {
            a
        } else {
            b
        }
    }

    /// The endpoint opposite to `p`, if `p` is an endpoint.
    pub fn other(&self, p: &Point) -> Option<Point> {
        if *p == self.lower {
            Some(self.upper())
        } else if *p == self.upper() {
            Some(self.lower)
        } else {
            None
        }
    }
}

/// Convenience wrapper around [`EdgeId::new`].
pub fn canonical_edge(a: Point, b: Point) -> Result<EdgeId> {
    EdgeId::new(a, b)
}

impl fmt::Debug for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}-{}>", self.lower, self.upper())
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
