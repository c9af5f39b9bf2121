use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::dist::DistributionSpec;
use crate::error::{Error, Result};

/// Percolation thresholds used by the usefulness test. These are literature
/// values and are meant to be edited, not trusted blindly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalTable {
    /// Bond percolation threshold `p_c(d)`.
    pub p_c: BTreeMap<usize, f64>,
    /// Oriented bond percolation threshold.
    pub p_c_oriented: BTreeMap<usize, f64>,
}

impl Default for CriticalTable {
    fn default() -> Self {
        CriticalTable { p_c: BTreeMap::from([(2, 0.5), (3, 0.2488)]), p_c_oriented: BTreeMap::from([(2, 0.6447)]) }
    }
}

impl CriticalTable {
    pub fn empty() -> Self {
        CriticalTable { p_c: BTreeMap::new(), p_c_oriented: BTreeMap::new() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Useful,
    NotUseful,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UsefulnessVerdict {
    pub verdict: Verdict,
    pub f_minus: f64,
    pub atom_at_f_minus: f64,
    /// The threshold compared against, absent when the table has no entry.
    pub threshold_used: Option<f64>,
}

/// `F` is useful when `F(0) < p_c(d)` if `F^- = 0`, or `F(F^-) < p_c_oriented(d)` if `F^- > 0`.
pub fn usefulness(dist: &DistributionSpec, d: usize, table: &CriticalTable) -> Result<UsefulnessVerdict> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("usefulness needs d >= 2, got {d}")));
    }
    let f_minus = dist.f_minus();
    let atom = dist.atom(f_minus);
    let threshold = if f_minus == 0.0 { table.p_c.get(&d) } else { table.p_c_oriented.get(&d) }.copied();
    let verdict = match threshold {
        None => Verdict::Unknown,
        Some(p) if atom < p => Verdict::Useful,
        Some(_) => Verdict::NotUseful,
    };
    Ok(UsefulnessVerdict { verdict, f_minus, atom_at_f_minus: atom, threshold_used: threshold })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_is_useful() {
        let v = usefulness(&DistributionSpec::Exponential { rate: 1.0 }, 2, &CriticalTable::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Useful);
        assert_eq!(v.atom_at_f_minus, 0.0);
        assert_eq!(v.threshold_used, Some(0.5));
    }

    #[test]
    fn heavy_atom_is_not_useful() {
        let d = DistributionSpec::BernoulliTwoPoint { a: 1.0, b: 2.0, p_a: 0.7 };
        let v = usefulness(&d, 2, &CriticalTable::default()).unwrap();
        assert_eq!(v.verdict, Verdict::NotUseful);
        assert_eq!(v.f_minus, 1.0);
        assert_eq!(v.threshold_used, Some(0.6447));
    }

    #[test]
    fn missing_entry_is_unknown() {
        let v = usefulness(&DistributionSpec::Exponential { rate: 1.0 }, 5, &CriticalTable::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Unknown);
        let v = usefulness(&DistributionSpec::Exponential { rate: 1.0 }, 2, &CriticalTable::empty()).unwrap();
        assert_eq!(v.verdict, Verdict::Unknown);
    }

    #[test]
    fn zero_atom_against_bond_threshold() {
        let d = DistributionSpec::BernoulliTwoPoint { a: 0.0, b: 1.0, p_a: 0.6 };
        assert_eq!(usefulness(&d, 2, &CriticalTable::default()).unwrap().verdict, Verdict::NotUseful);
        assert_eq!(usefulness(&d, 3, &CriticalTable::default()).unwrap().verdict, Verdict::NotUseful);
        let d = DistributionSpec::BernoulliTwoPoint { a: 0.0, b: 1.0, p_a: 0.2 };
        assert_eq!(usefulness(&d, 3, &CriticalTable::default()).unwrap().verdict, Verdict::Useful);
    }
}
