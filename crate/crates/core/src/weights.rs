//! Slowly varying weights `L` on `(0, 1]` and diagnostics for them.
//!
//! The logarithmic families are shifted by one so that `L` and `1/L` stay
//! bounded on every compact subset of `(0, 1]`, including `y = 1`:
//!
//! ```text
//! Const       L(y) = 1
//! LogPow      L(y) = (1 + |ln y|)^beta
//! LogLogPow   L(y) = (1 + ln(1 + |ln y|))^beta
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightFamily {
    Const,
    LogPow,
    LogLogPow,
}

/// A member of one of the three weight families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlowlyVaryingWeight {
    pub family: WeightFamily,
    #[serde(default)]
    pub beta: f64,
}

impl Default for SlowlyVaryingWeight {
    fn default() -> Self {
        Self::constant()
    }
}

impl fmt::Display for SlowlyVaryingWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            WeightFamily::Const => write!(f, "const"),
            WeightFamily::LogPow => write!(f, "logpow({})", self.beta),
            WeightFamily::LogLogPow => write!(f, "loglogpow({})", self.beta),
        }
    }
}

impl SlowlyVaryingWeight {
    pub fn constant() -> Self {
        SlowlyVaryingWeight { family: WeightFamily::Const, beta: 0.0 }
    }

    pub fn log_pow(beta: f64) -> Self {
        SlowlyVaryingWeight { family: WeightFamily::LogPow, beta }
    }

    pub fn log_log_pow(beta: f64) -> Self {
        SlowlyVaryingWeight { family: WeightFamily::LogLogPow, beta }
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta.is_finite() {
            Ok(())
        } else {
            Err(Error::Parameter(format!("weight exponent must be finite, got {}", self.beta)))
        }
    }

    /// `L(y)` without the domain check; callers guarantee `0 < y <= 1`.
    #[inline]
    pub(crate) fn value(&self, y: f64) -> f64 {
        let l = y.ln().abs();
        match self.family {
            WeightFamily::Const => 1.0,
            WeightFamily::LogPow => (1.0 + l).powf(self.beta),
            WeightFamily::LogLogPow => (1.0 + l.ln_1p()).powf(self.beta),
        }
    }
}

/// `L(y)` for `0 < y <= 1`.
pub fn eval_weight(weight: &SlowlyVaryingWeight, y: f64) -> Result<f64> {
    weight.validate()?;
    if !(y > 0.0 && y <= 1.0) {
        return Err(Error::Domain(format!("weights are defined on (0, 1], got y = {y}")));
    }
    Ok(weight.value(y))
}

/// Outcome of [`check_slow_variation`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlowVariationReport {
    /// `max_a |L(a eps) / L(eps) - 1|` at the smallest `eps`.
    pub deviation: f64,
    /// The same quantity for every `eps`, in the order given.
    pub per_eps: Vec<f64>,
    /// Whether `per_eps` is non-increasing along the grid.
    pub monotone: bool,
}

/// Measures how far `L(a eps) / L(eps)` is from 1 along a decreasing `eps` grid.
pub fn check_slow_variation(
    weight: &SlowlyVaryingWeight,
    a_set: &[f64],
    eps_grid: &[f64],
) -> Result<SlowVariationReport> {
    weight.validate()?;
    if a_set.is_empty() || eps_grid.is_empty() {
        return Err(Error::Domain("a_set and eps_grid must be nonempty".into()));
    }
    if let Some(a) = a_set.iter().find(|&&a| !(a > 0.0 && a.is_finite())) {
        return Err(Error::Domain(format!("dilations must be positive, got {a}")));
    }
    if eps_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain("eps_grid must be strictly decreasing".into()));
    }
    let per_eps = eps_grid
        .iter()
        .map(|&eps| {
            let base = eval_weight(weight, eps)?;
            a_set.iter().try_fold(0.0f64, |m, &a| {
                if a * eps > 1.0 {
                    return Err(Error::Domain(format!("a * eps = {} exceeds 1", a * eps)));
                }
                Ok(m.max((weight.value(a * eps) / base - 1.0).abs()))
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let monotone = per_eps.windows(2).all(|w| w[1] <= w[0]);
    Ok(SlowVariationReport { deviation: *per_eps.last().expect("nonempty"), per_eps, monotone })
}

/// Smallest `C` with `L(a y) / L(y) <= C (a + 1/a)` over the grids.
///
/// Pairs with `a y` outside `(0, 1]` are skipped.
pub fn potter_bound(weight: &SlowlyVaryingWeight, y_grid: &[f64], a_grid: &[f64]) -> f64 {
    let mut c = 0.0f64;
    for &y in y_grid.iter().filter(|&&y| y > 0.0 && y <= 1.0) {
        let base = weight.value(y);
        for &a in a_grid.iter().filter(|&&a| a > 0.0 && a * y <= 1.0) {
            c = c.max(weight.value(a * y) / base / (a + 1.0 / a));
        }
    }
    c
}
