use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 8;

/// A vertex of Z^d.
///
/// Stored inline (no heap allocation) so that shortest-path inner loops can
/// copy points freely. Unused trailing coordinates are always zero, which
/// keeps the derived `Eq`/`Hash` consistent.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    coords: [i64; MAX_DIM],
    dim: u8,
}

impl Point {
    pub fn new(coords: &[i64]) -> Result<Self> {
        let dim = coords.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Dimension(dim));
        }
        let mut c = [0i64; MAX_DIM];
        c[..dim].copy_from_slice(coords);
        Ok(Point { coords: c, dim: dim as u8 })
    }

    /// Panicking constructor for literals in tests and examples.
    pub fn from_slice(coords: &[i64]) -> Self {
        Self::new(coords).expect("valid point")
    }

    pub fn origin(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension out of range");
        Point { coords: [0; MAX_DIM], dim: dim as u8 }
    }

    /// `scale * e_axis`.
    pub fn axis(dim: usize, axis: usize, scale: i64) -> Self {
        let mut p = Self::origin(dim);
        p.coords[axis] = scale;
        p
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coords(&self) -> &[i64] {
        &self.coords[..self.dim as usize]
    }

    #[inline]
    pub fn get(&self, axis: usize) -> i64 {
        self.coords[axis]
    }

    #[inline]
    pub fn set(&mut self, axis: usize, value: i64) {
        debug_assert!(axis < self.dim());
        self.coords[axis] = value;
    }

    /// The point moved by `delta` along `axis`.
    #[inline]
    pub fn step(&self, axis: usize, delta: i64) -> Self {
        let mut p = *self;
        p.coords[axis] += delta;
        p
    }

    pub fn norm1(&self) -> i64 {
        self.coords().iter().map(|c| c.abs()).sum()
    }

    pub fn norm_inf(&self) -> i64 {
        self.coords().iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn dist1(&self, other: &Point) -> i64 {
        (*self - *other).norm1()
    }

    pub fn dist_inf(&self, other: &Point) -> i64 {
        (*self - *other).norm_inf()
    }

    pub fn is_adjacent(&self, other: &Point) -> bool {
        self.dim == other.dim && self.dist1(other) == 1
    }

    /// Nearest-neighbour vertices, ordered by axis then sign (-, +).
    pub fn neighbours(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.dim()).flat_map(move |a| [self.step(a, -1), self.step(a, 1)])
    }
}

impl Add for Point {
    type Output = Point;
    fn add(mut self, rhs: Point) -> Point {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..self.dim() {
            self.coords[i] += rhs.coords[i];
        }
        self
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(mut self, rhs: Point) -> Point {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..self.dim() {
            self.coords[i] -= rhs.coords[i];
        }
        self
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on coordinates (dimension first).
impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim.cmp(&other.dim).then_with(|| self.coords().cmp(other.coords()))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<i64>::deserialize(d)?;
        Point::new(&v).map_err(serde::de::Error::custom)
    }
}
