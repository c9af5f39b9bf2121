//! Geometry of Z^d: points, canonical edges, finite regions and shells.

mod edge;
mod point;
mod region;
mod shell;

pub use edge::{canonical_edge, EdgeId};
pub use point::{Point, MAX_DIM};
pub use region::{BoxRegion, Region, SetRegion, COORD_LIMIT};
pub use shell::{shell, Shell};
