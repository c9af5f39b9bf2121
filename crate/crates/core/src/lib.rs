//! First passage percolation on Z^d.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boxes;
pub mod error;
pub mod harness;
pub mod lattice;
pub mod order;
pub mod passage;
pub mod weights;
pub mod xi;

pub use error::{Error, Result};
