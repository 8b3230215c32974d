//! Uniformly sampled real signals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::HasMoments;
use crate::smooth::plateau;

/// Samples `f(t0 + n dt)`, `n = 0..N`, of a real function. Outside the
/// sampled window the signal is taken to be zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledSignal {
    t0: f64,
    dt: f64,
    samples: Vec<f64>,
}

impl SampledSignal {
    pub fn new(samples: Vec<f64>, t0: f64, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Parameter(format!("dt must be positive, got {dt}")));
        }
        if !t0.is_finite() {
            return Err(Error::Parameter(format!("t0 must be finite, got {t0}")));
        }
        if samples.is_empty() {
            return Err(Error::Input("signal has no samples".into()));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!("sample {i} is not finite ({})", samples[i])));
        }
        Ok(SampledSignal { t0, dt, samples })
    }

    /// Samples `f` at `t0 + n dt` for `n < n_samples`.
    pub fn from_fn<F: Fn(f64) -> f64>(t0: f64, dt: f64, n_samples: usize, f: F) -> Result<Self> {
        let samples = (0..n_samples).map(|n| f(t0 + n as f64 * dt)).collect();
        Self::new(samples, t0, dt)
    }

    /// `n_samples` points spread evenly over `[lo, hi)`.
    pub fn on_window<F: Fn(f64) -> f64>(lo: f64, hi: f64, n_samples: usize, f: F) -> Result<Self> {
        if !(hi > lo) || n_samples == 0 {
            return Err(Error::Parameter(format!("empty window [{lo}, {hi})")));
        }
        Self::from_fn(lo, (hi - lo) / n_samples as f64, n_samples, f)
    }

    pub fn zeros_like(&self) -> Self {
        SampledSignal { t0: self.t0, dt: self.dt, samples: vec![0.0; self.len()] }
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// Abscissa of sample `i`.
    #[inline]
    pub fn t(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    /// Abscissa of the last sample.
    pub fn t_last(&self) -> f64 {
        self.t(self.len() - 1)
    }

    pub fn same_grid(&self, other: &SampledSignal) -> bool {
        self.len() == other.len() && self.t0 == other.t0 && self.dt == other.dt
    }

    pub(crate) fn require_same_grid(&self, other: &SampledSignal) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "grids differ: (t0 {}, dt {}, N {}) vs (t0 {}, dt {}, N {})",
                self.t0,
                self.dt,
                self.len(),
                other.t0,
                other.dt,
                other.len()
            )))
        }
    }

    pub(crate) fn require_transform_len(&self) -> Result<()> {
        if self.len() < 8 {
            Err(Error::Input(format!("transforms need at least 8 samples, got {}", self.len())))
        } else {
            Ok(())
        }
    }

    /// Same grid, new samples.
    pub fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != self.len() {
            return Err(Error::Shape(format!(
                "expected {} samples, got {}",
                self.len(),
                samples.len()
            )));
        }
        Self::new(samples, self.t0, self.dt)
    }

    pub fn map<F: Fn(f64, f64) -> f64>(&self, f: F) -> Result<Self> {
        let s = self.samples.iter().enumerate().map(|(i, &v)| f(self.t(i), v)).collect();
        self.with_samples(s)
    }

    pub fn scale(&self, lambda: f64) -> Self {
        SampledSignal {
            t0: self.t0,
            dt: self.dt,
            samples: self.samples.iter().map(|v| v * lambda).collect(),
        }
    }

    /// `a * self + b * other` on a shared grid.
    pub fn combine(&self, a: f64, other: &SampledSignal, b: f64) -> Result<Self> {
        self.require_same_grid(other)?;
        let s = self.samples.iter().zip(&other.samples).map(|(x, y)| a * x + b * y).collect();
        self.with_samples(s)
    }

    /// Moves the samples `k` places to the right (left for negative `k`)
    /// on the same grid, filling with zeros.
    pub fn shift(&self, k: isize) -> Self {
        let n = self.len() as isize;
        let samples = (0..n)
            .map(|i| {
                let j = i - k;
                if (0..n).contains(&j) {
                    self.samples[j as usize]
                } else {
                    0.0
                }
            })
            .collect();
        SampledSignal { t0: self.t0, dt: self.dt, samples }
    }

    /// Multiplies by a smooth window that is 1 away from the edges and
    /// falls to 0 over `width` at each end.
    pub fn tapered(&self, width: f64) -> Result<Self> {
        let lo = self.t0;
        let hi = self.t_last();
        if !(width > 0.0 && 2.0 * width <= hi - lo) {
            return Err(Error::Parameter(format!("taper width {width} does not fit the window")));
        }
        self.map(|t, v| v * plateau(t, lo, hi, width))
    }

    /// `max |f|` over the index range `[start, end)`.
    pub fn sup_abs(&self, start: usize, end: usize) -> f64 {
        self.samples[start..end].iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl HasMoments for SampledSignal {
    /// Trapezoid rule for `int t^m f(t) dt` over the sampled window.
    fn moment(&self, m: u32) -> Result<f64> {
        let n = self.len();
        if n < 2 {
            return Err(Error::Input("moments need at least two samples".into()));
        }
        let mut acc = 0.0;
        for (i, &v) in self.samples.iter().enumerate() {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            acc += w * self.t(i).powi(m as i32) * v;
        }
        Ok(acc * self.dt)
    }
}
