//! Log-uniform scale grids and interior windows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How far from each window edge the interior starts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Margin {
    /// `y_max` times the decay radius of the kernels involved.
    Auto,
    /// An explicit distance in time units.
    Fixed(f64),
}

/// Scales `y_j = y_max 2^{-j/voices}`, `j = 0..=J`, with `J` the first
/// index where `y_J <= y_min`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleGrid {
    pub y_min: f64,
    pub y_max: f64,
    pub voices: u32,
    pub margin: Margin,
}

impl ScaleGrid {
    pub fn new(y_min: f64, y_max: f64, voices: u32) -> Result<Self> {
        if !(y_min.is_finite() && y_max.is_finite() && 0.0 < y_min && y_min < y_max) {
            return Err(Error::Parameter(format!(
                "scale grid needs 0 < y_min < y_max, got ({y_min}, {y_max})"
            )));
        }
        if voices < 4 {
            return Err(Error::Parameter(format!("voices must be >= 4, got {voices}")));
        }
        Ok(ScaleGrid { y_min, y_max, voices, margin: Margin::Auto })
    }

    /// `y_max = 1`, `y_min = max(4 dt, 2^-10)`, 16 voices.
    pub fn default_for(dt: f64) -> Result<Self> {
        Self::new((4.0 * dt).max(2f64.powi(-10)), 1.0, 16)
    }

    pub fn with_margin(mut self, margin: Margin) -> Result<Self> {
        if let Margin::Fixed(m) = margin {
            if !(m.is_finite() && m >= 0.0) {
                return Err(Error::Parameter(format!("margin must be >= 0, got {m}")));
            }
        }
        self.margin = margin;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        let octaves = (self.y_max / self.y_min).log2();
        (self.voices as f64 * octaves - 1e-9).ceil().max(1.0) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len())
            .map(|j| self.y_max * 2f64.powf(-(j as f64) / self.voices as f64))
            .collect()
    }

    /// Step of the grid in `ln y`.
    pub fn log_step(&self) -> f64 {
        std::f64::consts::LN_2 / self.voices as f64
    }

    /// Trapezoid weights for `int . dy / y` over the grid.
    pub fn quadrature_weights(&self) -> Vec<f64> {
        let n = self.len();
        let h = self.log_step();
        (0..n)
            .map(|j| if j == 0 || j == n - 1 { 0.5 * h } else { h })
            .collect()
    }

    /// The smallest scale of the grid.
    pub fn finest(&self) -> f64 {
        *self.values().last().expect("grid is never empty")
    }

    pub(crate) fn check_nyquist(&self, dt: f64) -> Result<()> {
        let finest = self.finest();
        let guard = 2.0 * dt;
        if finest < guard * (1.0 - 1e-9) {
            Err(Error::Scale { scale: finest, guard })
        } else {
            Ok(())
        }
    }

    /// Margin distance given the decay radius of the kernels in use.
    pub fn margin_distance(&self, decay_radius: f64) -> f64 {
        match self.margin {
            Margin::Auto => self.y_max * decay_radius,
            Margin::Fixed(m) => m,
        }
    }
}

/// Index range `[start, end)` of the samples that are at least `margin`
/// away from both window edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interior {
    pub start: usize,
    pub end: usize,
}

impl Interior {
    pub fn from_margin(n: usize, dt: f64, margin: f64) -> Result<Self> {
        let k = (margin / dt - 1e-9).ceil().max(0.0) as usize;
        if 2 * k >= n {
            return Err(Error::Grid(format!(
                "interior window is empty: margin {margin} leaves no samples of {n} at dt {dt}"
            )));
        }
        Ok(Interior { start: k, end: n - k })
    }

    pub fn full(n: usize) -> Self {
        Interior { start: 0, end: n }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn contains(&self, i: usize) -> bool {
        self.start <= i && i < self.end
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_values_are_log_uniform_and_reach_y_min() {
        let g = ScaleGrid::new(1.0 / 64.0, 1.0, 16).unwrap();
        let v = g.values();
        assert_eq!(v.len(), 97);
        assert_eq!(v[0], 1.0);
        assert!((v[96] - 1.0 / 64.0).abs() < 1e-15);
        assert!(v.windows(2).all(|w| w[1] < w[0]));
        let g = ScaleGrid::new(0.1, 1.0, 4).unwrap();
        let v = g.values();
        assert!(*v.last().unwrap() <= 0.1);
        assert!(v[v.len() - 2] > 0.1);
    }

    #[test]
    fn invalid_grids_are_rejected() {
        assert!(ScaleGrid::new(0.0, 1.0, 16).is_err());
        assert!(ScaleGrid::new(1.0, 0.5, 16).is_err());
        assert!(ScaleGrid::new(0.1, 1.0, 3).is_err());
        assert!(ScaleGrid::new(0.1, 1.0, 8).unwrap().with_margin(Margin::Fixed(-1.0)).is_err());
    }

    #[test]
    fn default_grid() {
        let g = ScaleGrid::default_for(1e-5).unwrap();
        assert_eq!((g.y_min, g.y_max, g.voices), (2f64.powi(-10), 1.0, 16));
        let g = ScaleGrid::default_for(0.01).unwrap();
        assert_eq!(g.y_min, 0.04);
    }

    #[test]
    fn nyquist_guard() {
        let g = ScaleGrid::new(0.01, 1.0, 8).unwrap();
        assert!(g.check_nyquist(0.004).is_ok());
        assert!(matches!(g.check_nyquist(0.01), Err(Error::Scale { .. })));
    }

    #[test]
    fn quadrature_weights_sum_to_log_range() {
        let g = ScaleGrid::new(0.25, 1.0, 8).unwrap();
        let s: f64 = g.quadrature_weights().iter().sum();
        assert!((s - 4f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn interior_window() {
        let w = Interior::from_margin(100, 0.1, 1.0).unwrap();
        assert_eq!((w.start, w.end), (10, 90));
        assert!(Interior::from_margin(100, 0.1, 5.0).is_err());
    }
}
