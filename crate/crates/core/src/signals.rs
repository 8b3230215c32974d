//! Deterministic test signals with known regularity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::smooth::plateau;
use crate::transform::SampledSignal;

/// Default sampling window and length of generated signals.
pub const DEFAULT_WINDOW: (f64, f64) = (-8.0, 8.0);
pub const DEFAULT_LEN: usize = 1 << 14;

/// Serializable description of a synthetic signal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SignalSpec {
    /// `sum_{j=0}^{levels} 2^{-j s} cos(2^j t + phase_j)`; missing phases are 0.
    Weierstrass {
        s: f64,
        levels: u32,
        #[serde(default)]
        phases: Vec<f64>,
    },
    /// `|t - center|^gamma (1 + |ln |t - center||)^log_power`, 0 at the center.
    Cusp {
        gamma: f64,
        #[serde(default)]
        center: f64,
        #[serde(default)]
        log_power: f64,
    },
    /// Inverse Fourier transform of the even band bump on `lo <= |xi| <= hi`.
    BandBump { lo: f64, hi: f64 },
    /// `cos(omega t)`.
    Cos { omega: f64 },
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must be finite, got {v}")))
    }
}

impl SignalSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            SignalSpec::Weierstrass { s, levels, phases } => {
                if !(*s > 0.0 && *s < 1.0) {
                    return Err(Error::Parameter(format!("weierstrass needs 0 < s < 1, got {s}")));
                }
                if *levels > 60 {
                    return Err(Error::Parameter(format!("at most 60 levels, got {levels}")));
                }
                if phases.len() > *levels as usize + 1 {
                    return Err(Error::Parameter(format!(
                        "{} phases for {} levels",
                        phases.len(),
                        levels + 1
                    )));
                }
                phases.iter().try_for_each(|p| finite("phase", *p))
            }
            SignalSpec::Cusp { gamma, center, log_power } => {
                if !(*gamma > 0.0 && gamma.is_finite()) {
                    return Err(Error::Parameter(format!("cusp needs gamma > 0, got {gamma}")));
                }
                finite("center", *center)?;
                finite("log_power", *log_power)
            }
            SignalSpec::BandBump { lo, hi } => {
                if lo.is_finite() && hi.is_finite() && 0.0 < *lo && lo < hi {
                    Ok(())
                } else {
                    Err(Error::Parameter(format!("bandbump needs 0 < lo < hi, got [{lo}, {hi}]")))
                }
            }
            SignalSpec::Cos { omega } => finite("omega", *omega),
        }
    }

    /// Samples the signal at `n` points of `[lo, hi)`.
    pub fn sample(&self, lo: f64, hi: f64, n: usize) -> Result<SampledSignal> {
        self.validate()?;
        match self {
            SignalSpec::Weierstrass { s, levels, phases } => {
                let terms: Vec<(f64, f64, f64)> = (0..=*levels)
                    .map(|j| {
                        let p = phases.get(j as usize).copied().unwrap_or(0.0);
                        (2f64.powi(j as i32), 2f64.powf(-(j as f64) * s), p)
                    })
                    .collect();
                SampledSignal::on_window(lo, hi, n, |t| {
                    terms.iter().map(|(f, a, p)| a * (f * t + p).cos()).sum()
                })
            }
            SignalSpec::Cusp { gamma, center, log_power } => SampledSignal::on_window(lo, hi, n, |t| {
                let r = (t - center).abs();
                if r == 0.0 {
                    0.0
                } else {
                    r.powf(*gamma) * (1.0 + r.ln().abs()).powf(*log_power)
                }
            }),
            SignalSpec::BandBump { lo: a, hi: b } => {
                let reach = lo.abs().max(hi.abs());
                band_bump_signal(*a, *b, lo, hi, n, reach)
            }
            SignalSpec::Cos { omega } => SampledSignal::on_window(lo, hi, n, |t| (omega * t).cos()),
        }
    }

    /// Samples on [`DEFAULT_WINDOW`] with [`DEFAULT_LEN`] points.
    pub fn sample_default(&self) -> Result<SampledSignal> {
        self.sample(DEFAULT_WINDOW.0, DEFAULT_WINDOW.1, DEFAULT_LEN)
    }
}

/// `(1/pi) int_a^b B(xi) cos(xi t) d xi` by the trapezoid rule, which is
/// spectrally accurate for the compactly supported smooth integrand.
fn band_bump_signal(a: f64, b: f64, lo: f64, hi: f64, n: usize, reach: f64) -> Result<SampledSignal> {
    let width = (b - a) / 3.0;
    let nodes = ((8.0 * (b - a) * reach) as usize).max(1024);
    let h = (b - a) / nodes as f64;
    let weights: Vec<(f64, f64)> = (1..nodes)
        .map(|k| {
            let xi = a + k as f64 * h;
            (xi, plateau(xi, a, b, width) * h / std::f64::consts::PI)
        })
        .filter(|(_, w)| *w > 0.0)
        .collect();
    SampledSignal::on_window(lo, hi, n, |t| weights.iter().map(|(xi, w)| w * (xi * t).cos()).sum())
}
