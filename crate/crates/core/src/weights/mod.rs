//! Random edge-weight environments.

mod config;
mod dist;
pub mod prf;
mod usefulness;

pub use config::{weight, WeightConfig};
pub use dist::{condition_probability_lower_bound, DistributionSpec, MomentLabels};
pub use usefulness::{usefulness, CriticalTable, UsefulnessVerdict, Verdict};
