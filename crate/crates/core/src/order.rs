//! Growth orders `f_{d,r}(N)` and the exponent `g(r,d,L,k1)`.
//!
//! All logarithms are natural.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest `N` accepted by [`f`]; guarantees `log log N > 0`.
pub const MIN_N: u64 = 16;

/// The six cases of the growth order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "r=0")]
    Zero,
    #[serde(rename = "0<r<d-1")]
    BelowCritical,
    #[serde(rename = "r=d-1")]
    Critical,
    #[serde(rename = "d-1<r<d")]
    Between,
    #[serde(rename = "r=d")]
    AtD,
    #[serde(rename = "r>d")]
    Above,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Zero => "r=0",
            Regime::BelowCritical => "0<r<d-1",
            Regime::Critical => "r=d-1",
            Regime::Between => "d-1<r<d",
            Regime::AtD => "r=d",
            Regime::Above => "r>d",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderSpec {
    pub d: usize,
    pub r: f64,
    pub regime: Regime,
}

impl OrderSpec {
    pub fn new(d: usize, r: f64) -> Result<Self> {
        Ok(OrderSpec { d, r, regime: regime(d, r)? })
    }

    pub fn f(&self, n: u64) -> Result<f64> {
        f(self.d, self.r, n)
    }
}

/// Case split of `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LdpCase {
    #[serde(rename = "1<r<d")]
    BelowD,
    #[serde(rename = "r=d")]
    AtD,
    #[serde(rename = "d<r<d+1")]
    Between,
    #[serde(rename = "r=d+1")]
    AtDPlusOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LdpExponentSpec {
    pub r: f64,
    pub d: usize,
    pub case: LdpCase,
}

impl LdpExponentSpec {
    pub fn new(r: f64, d: usize) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidParameter("g needs d >= 1".into()));
        }
        let df = d as f64;
        let case = if !(r > 1.0) || r.is_nan() {
            return Err(Error::OutOfRange(format!("g is defined for r > 1, got r={r}")));
        } else if r < df {
            LdpCase::BelowD
        } else if r == df {
            LdpCase::AtD
        } else if r < df + 1.0 {
            LdpCase::Between
        } else if r == df + 1.0 {
            LdpCase::AtDPlusOne
        } else {
            return Err(Error::OutOfRange(format!("g is defined for r <= d+1, got r={r}, d={d}")));
        };
        Ok(LdpExponentSpec { r, d, case })
    }
}

/// The unique case of the growth order for `(d, r)`. `r = inf` (bounded
/// weights) falls in the last case.
pub fn regime(d: usize, r: f64) -> Result<Regime> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("growth order needs d >= 2, got {d}")));
    }
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter(format!("r must be >= 0, got {r}")));
    }
    let d = d as f64;
    Ok(if r == 0.0 {
        Regime::Zero
    } else if r < d - 1.0 {
        Regime::BelowCritical
    } else if r == d - 1.0 {
        Regime::Critical
    } else if r < d {
        Regime::Between
    } else if r == d {
        Regime::AtD
    } else {
        Regime::Above
    })
}

/// `f_{d,r}(N)`.
pub fn f(d: usize, r: f64, n: u64) -> Result<f64> {
    let reg = regime(d, r)?;
    if n < MIN_N {
        return Err(Error::InvalidParameter(format!("N must be >= {MIN_N}, got {n}")));
    }
    Ok(f_real(d, r, reg, n as f64))
}

/// `f_{d,r}` at a real argument `x >= 16`, used where `N` is not an integer.
pub fn f_real_arg(d: usize, r: f64, x: f64) -> Result<f64> {
    let reg = regime(d, r)?;
    if !(x >= MIN_N as f64) {
        return Err(Error::InvalidParameter(format!("N must be >= {MIN_N}, got {x}")));
    }
    Ok(f_real(d, r, reg, x))
}

fn f_real(d: usize, r: f64, reg: Regime, n: f64) -> f64 {
    let l = n.ln();
    let ll = l.ln();
    let df = d as f64;
    match reg {
        Regime::Zero => l / ll,
        Regime::BelowCritical => l.powf(1.0 / (1.0 + r)),
        Regime::Critical => l.powf(1.0 / df) * ll.powf((df - 2.0) / df),
        Regime::Between => l.powf(1.0 / df),
        Regime::AtD => l.powf(1.0 / df) * ll.powf(-1.0 / df),
        Regime::Above => l.powf(1.0 / r),
    }
}

/// `g(r, d, L, k1)`.
pub fn g(r: f64, d: usize, l: f64, k1: f64) -> Result<f64> {
    let spec = LdpExponentSpec::new(r, d)?;
    if !(l >= 1.0) {
        return Err(Error::InvalidParameter(format!("L must be >= 1, got {l}")));
    }
    let df = d as f64;
    Ok(match spec.case {
        LdpCase::BelowD => l.powf(r),
        LdpCase::AtD => {
            if !(l >= 2.0) {
                return Err(Error::InvalidParameter(format!("the r=d case needs L >= 2, got {l}")));
            }
            l.powf(df) / l.ln().powf(df - 1.0)
        }
        LdpCase::Between => l.powf(df),
        LdpCase::AtDPlusOne => {
            if !(k1 >= 1.0) {
                return Err(Error::InvalidParameter(format!("the r=d+1 case needs k1 >= 1, got {k1}")));
            }
            l.powf(df + 1.0) / k1
        }
    })
}
