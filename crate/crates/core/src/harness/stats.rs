//! Small-sample statistics for the experiment reports.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("standard normal")
}

/// Two-sided standard normal quantile for confidence `level`.
pub fn z_two_sided(level: f64) -> f64 {
    std_normal().inverse_cdf(0.5 + level / 2.0)
}

pub fn normal_cdf(x: f64) -> f64 {
    std_normal().cdf(x)
}

pub fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Unbiased sample variance; undefined below two observations.
pub fn sample_variance(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs)?;
    Some(xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64)
}

pub fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[k] } else { 0.5 * (v[k - 1] + v[k]) })
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson(k: u64, n: u64, level: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = z_two_sided(level);
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if k == 0.0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Ordinary least squares `y = intercept + slope x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ols {
    pub slope: f64,
    pub intercept: f64,
    /// `NaN` with fewer than three points.
    pub slope_se: f64,
    pub r2: f64,
    pub points: usize,
}

impl Ols {
    /// Two-sided t-based confidence interval for the slope.
    pub fn slope_ci(&self, level: f64) -> Option<(f64, f64)> {
        if self.points < 3 || !self.slope_se.is_finite() {
            return None;
        }
        let t = StudentsT::new(0.0, 1.0, (self.points - 2) as f64).ok()?.inverse_cdf(0.5 + level / 2.0);
        Some((self.slope - t * self.slope_se, self.slope + t * self.slope_se))
    }
}

pub fn ols(x: &[f64], y: &[f64]) -> Option<Ols> {
    let n = x.len();
    if n != y.len() || n < 2 {
        return None;
    }
    let mx = mean(x)?;
    let my = mean(y)?;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let slope_se = if n > 2 { (sse / (n - 2) as f64 / sxx).sqrt() } else { f64::NAN };
    let r2 = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    Some(Ols { slope, intercept, slope_se, r2, points: n })
}

/// Cochran-Armitage test for a linear trend in binomial proportions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendTest {
    pub z: f64,
    /// One-sided p-value against an increasing trend.
    pub p_increasing: f64,
    pub p_decreasing: f64,
}

/// `successes[i]` out of `trials[i]` at score `scores[i]`. With no
/// variation in the pooled proportion the statistic is 0.
pub fn cochran_armitage(scores: &[f64], successes: &[u64], trials: &[u64]) -> TrendTest {
    let total: f64 = trials.iter().map(|&n| n as f64).sum();
    let hits: f64 = successes.iter().map(|&k| k as f64).sum();
    let p = if total > 0.0 { hits / total } else { 0.0 };
    let mut t = 0.0;
    let (mut s1, mut s2) = (0.0, 0.0);
    for ((&s, &k), &n) in scores.iter().zip(successes).zip(trials) {
        let n = n as f64;
        t += s * (k as f64 - n * p);
        s1 += n * s;
        s2 += n * s * s;
    }
    let var = p * (1.0 - p) * (s2 - s1 * s1 / total.max(1.0));
    let z = if var > 0.0 { t / var.sqrt() } else { 0.0 };
    TrendTest { z, p_increasing: 1.0 - normal_cdf(z), p_decreasing: normal_cdf(z) }
}
