use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn one() -> f64 {
    1.0
}

/// Edge-weight distribution families.
///
/// JSON form: `{"family": "exponential", "params": {"rate": 1.0}}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum DistributionSpec {
    /// `P(tau > t) = exp(-(t/scale)^r)`.
    WeibullTail {
        r: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    Exponential {
        rate: f64,
    },
    /// `P(tau > t) = (min/t)^exponent` for `t >= min`.
    Pareto {
        exponent: f64,
        min: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    /// `a` with probability `p_a`, otherwise `b`.
    BernoulliTwoPoint {
        a: f64,
        b: f64,
        p_a: f64,
    },
    Constant {
        v: f64,
    },
}

/// Advisory moment labels; never a gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentLabels {
    pub finite_second_moment: bool,
    pub all_moments_finite: bool,
}

impl DistributionSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(format!("{}: {m}", self.name())));
        let finite = |x: f64| x.is_finite();
        match *self {
            Self::WeibullTail { r, scale } => {
                if !(finite(r) && r > 0.0) {
                    return bad("r must be positive");
                }
                if !(finite(scale) && scale > 0.0) {
                    return bad("scale must be positive");
                }
            }
            Self::Exponential { rate } => {
                if !(finite(rate) && rate > 0.0) {
                    return bad("rate must be positive");
                }
            }
            Self::Pareto { exponent, min } => {
                if !(finite(exponent) && exponent > 0.0) {
                    return bad("exponent must be positive");
                }
                if !(finite(min) && min > 0.0) {
                    return bad("min must be positive");
                }
            }
            Self::Uniform { lo, hi } => {
                if !(finite(lo) && finite(hi) && lo >= 0.0 && lo <= hi) {
                    return bad("need 0 <= lo <= hi");
                }
            }
            Self::BernoulliTwoPoint { a, b, p_a } => {
                if !(finite(a) && finite(b) && a >= 0.0 && b >= 0.0) {
                    return bad("atoms must be nonnegative");
                }
                if !(0.0..=1.0).contains(&p_a) {
                    return bad("p_a must lie in [0,1]");
                }
            }
            Self::Constant { v } => {
                if !(finite(v) && v >= 0.0) {
                    return bad("value must be nonnegative");
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::WeibullTail { .. } => "weibull_tail",
            Self::Exponential { .. } => "exponential",
            Self::Pareto { .. } => "pareto",
            Self::Uniform { .. } => "uniform",
            Self::BernoulliTwoPoint { .. } => "bernoulli_two_point",
            Self::Constant { .. } => "constant",
        }
    }

    fn two_point(a: f64, b: f64, p_a: f64) -> (f64, f64, f64) {
        // (smaller atom, larger atom, mass of the smaller one)
        if a <= b {
            (a, b, p_a)
        } else {
            (b, a, 1.0 - p_a)
        }
    }

    /// Inverse survival function: the weight `x` with `P(tau > x) = u`.
    ///
    /// Larger `u` gives a smaller weight, so a common variate couples all
    /// families monotonically.
    #[inline]
    pub fn sample(&self, u: f64) -> f64 {
        match *self {
            Self::WeibullTail { r, scale } => {
                let y = -u.ln();
                if r == 1.0 {
                    scale * y
                } else {
                    scale * y.powf(1.0 / r)
                }
            }
            Self::Exponential { rate } => -u.ln() / rate,
            Self::Pareto { exponent, min } => min * u.powf(-1.0 / exponent),
            Self::Uniform { lo, hi } => hi - (hi - lo) * u,
            Self::BernoulliTwoPoint { a, b, p_a } => {
                let (small, large, p_small) = Self::two_point(a, b, p_a);
                if u < 1.0 - p_small {
                    large
                } else {
                    small
                }
            }
            Self::Constant { v } => v,
        }
    }

    /// `P(tau <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::WeibullTail { r, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-(x / scale).powf(r)).exp_m1()
                }
            }
            Self::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            Self::Pareto { exponent, min } => {
                if x < min {
                    0.0
                } else {
                    1.0 - (min / x).powf(exponent)
                }
            }
            Self::Uniform { lo, hi } => {
                if x < lo {
                    0.0
                } else if x >= hi {
                    1.0
                } else {
                    (x - lo) / (hi - lo)
                }
            }
            Self::BernoulliTwoPoint { a, b, p_a } => {
                let (small, large, p_small) = Self::two_point(a, b, p_a);
                if x < small {
                    0.0
                } else if x < large {
                    p_small
                } else {
                    1.0
                }
            }
            Self::Constant { v } => {
                if x < v {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// `P(tau < x)`.
    pub fn cdf_left(&self, x: f64) -> f64 {
        self.cdf(x) - self.atom(x)
    }

    /// `P(tau > x)`.
    pub fn survival(&self, x: f64) -> f64 {
        match *self {
            Self::WeibullTail { r, scale } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-(x / scale).powf(r)).exp()
                }
            }
            Self::Exponential { rate } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-rate * x).exp()
                }
            }
            Self::Pareto { exponent, min } => {
                if x < min {
                    1.0
                } else {
                    (min / x).powf(exponent)
                }
            }
            _ => 1.0 - self.cdf(x),
        }
    }

    /// `P(tau = x)`.
    pub fn atom(&self, x: f64) -> f64 {
        match *self {
            Self::BernoulliTwoPoint { a, b, p_a } => {
                let mut m = 0.0;
                if x == a {
                    m += p_a;
                }
                if x == b {
                    m += 1.0 - p_a;
                }
                m
            }
            Self::Constant { v } => {
                if x == v {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Uniform { lo, hi } if lo == hi && x == lo => 1.0,
            _ => 0.0,
        }
    }

    /// Infimum of the support, `F^-`.
    pub fn f_minus(&self) -> f64 {
        match *self {
            Self::WeibullTail { .. } | Self::Exponential { .. } => 0.0,
            Self::Pareto { min, .. } => min,
            Self::Uniform { lo, .. } => lo,
            Self::BernoulliTwoPoint { a, b, p_a } => {
                let (small, large, p_small) = Self::two_point(a, b, p_a);
                if p_small > 0.0 {
                    small
                } else {
                    large
                }
            }
            Self::Constant { v } => v,
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::WeibullTail { r, scale } => scale * gamma(1.0 + 1.0 / r),
            Self::Exponential { rate } => 1.0 / rate,
            Self::Pareto { exponent, min } => {
                if exponent > 1.0 {
                    exponent * min / (exponent - 1.0)
                } else {
                    f64::INFINITY
                }
            }
            Self::Uniform { lo, hi } => 0.5 * (lo + hi),
            Self::BernoulliTwoPoint { a, b, p_a } => p_a * a + (1.0 - p_a) * b,
            Self::Constant { v } => v,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Self::WeibullTail { r, scale } => {
                let g1 = gamma(1.0 + 1.0 / r);
                scale * scale * (gamma(1.0 + 2.0 / r) - g1 * g1)
            }
            Self::Exponential { rate } => 1.0 / (rate * rate),
            Self::Pareto { exponent, min } => {
                if exponent > 2.0 {
                    min * min * exponent / ((exponent - 1.0).powi(2) * (exponent - 2.0))
                } else {
                    f64::INFINITY
                }
            }
            Self::Uniform { lo, hi } => (hi - lo).powi(2) / 12.0,
            Self::BernoulliTwoPoint { a, b, p_a } => p_a * (1.0 - p_a) * (a - b).powi(2),
            Self::Constant { .. } => 0.0,
        }
    }

    pub fn moments(&self) -> MomentLabels {
        match *self {
            Self::Pareto { exponent, .. } => {
                MomentLabels { finite_second_moment: exponent > 2.0, all_moments_finite: false }
            }
            _ => MomentLabels { finite_second_moment: true, all_moments_finite: true },
        }
    }

    /// Tail exponent `r` used to pick the growth order: Weibull-type tails
    /// `exp(-t^r)` give `r`, power laws give 0 and bounded supports give
    /// infinity.
    pub fn tail_exponent(&self) -> f64 {
        match *self {
            Self::WeibullTail { r, .. } => r,
            Self::Exponential { .. } => 1.0,
            Self::Pareto { .. } => 0.0,
            _ => f64::INFINITY,
        }
    }

    /// True when every support point is an integer, so sums are exact in f64.
    pub fn is_atomic_integer(&self) -> bool {
        let int = |x: f64| x.fract() == 0.0 && x.abs() < 2f64.powi(40);
        match *self {
            Self::BernoulliTwoPoint { a, b, .. } => int(a) && int(b),
            Self::Constant { v } => int(v),
            Self::Uniform { lo, hi } => lo == hi && int(lo),
            _ => false,
        }
    }
}

/// Lanczos approximation of the gamma function for positive arguments.
pub(crate) fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = C[0];
        let t = x + G + 0.5;
        for (i, c) in C.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

/// `P(t < tau < gamma t)`, computed exactly from the distribution function.
pub fn condition_probability_lower_bound(dist: &DistributionSpec, t: f64, gamma: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    if !(gamma > 1.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!("gamma must exceed 1, got {gamma}")));
    }
    Ok((dist.cdf_left(gamma * t) - dist.cdf(t)).max(0.0))
}
