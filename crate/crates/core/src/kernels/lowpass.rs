//! Low-pass kernels `phi` with `phi_hat = 1` near the origin.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use super::profile::profile;
use super::wavelet::DEFAULT_DECAY_TOL;
use crate::error::{Error, Result};
use crate::smooth::theta;

type RealSpectrumFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Shape {
    Meyer,
    Custom { name: String, f: RealSpectrumFn },
}

/// A real, even low-pass transform with `phi_hat = 1` for `|xi| <= xi_pass`
/// and `phi_hat = 0` for `|xi| >= xi_stop`.
#[derive(Clone)]
pub struct LowPass {
    shape: Shape,
    xi_pass: f64,
    xi_stop: f64,
    decay: Arc<OnceLock<f64>>,
}

impl fmt::Debug for LowPass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LowPass")
            .field("id", &self.id())
            .field("xi_pass", &self.xi_pass)
            .field("xi_stop", &self.xi_stop)
            .finish()
    }
}

fn check_band(xi_pass: f64, xi_stop: f64) -> Result<()> {
    if xi_pass.is_finite() && xi_stop.is_finite() && 0.0 < xi_pass && xi_pass < xi_stop {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "low-pass band requires 0 < xi_pass < xi_stop, got ({xi_pass}, {xi_stop})"
        )))
    }
}

impl LowPass {
    /// `theta((xi_stop - |xi|) / (xi_stop - xi_pass))`.
    pub fn meyer(xi_pass: f64, xi_stop: f64) -> Result<Self> {
        check_band(xi_pass, xi_stop)?;
        Ok(LowPass {
            shape: Shape::Meyer,
            xi_pass,
            xi_stop,
            decay: Arc::new(OnceLock::new()),
        })
    }

    /// Arbitrary real transform. The band bounds are trusted, not checked
    /// against `f`; [`validate_lp_pair`](super::validate_lp_pair) inspects
    /// the values that matter.
    pub fn custom<F>(name: &str, f: F, xi_pass: f64, xi_stop: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        check_band(xi_pass, xi_stop)?;
        Ok(LowPass {
            shape: Shape::Custom { name: name.to_string(), f: Arc::new(f) },
            xi_pass,
            xi_stop,
            decay: Arc::new(OnceLock::new()),
        })
    }

    #[inline]
    pub fn fhat(&self, xi: f64) -> f64 {
        match &self.shape {
            Shape::Meyer => theta((self.xi_stop - xi.abs()) / (self.xi_stop - self.xi_pass)),
            Shape::Custom { f, .. } => f(xi),
        }
    }

    pub fn xi_pass(&self) -> f64 {
        self.xi_pass
    }

    pub fn xi_stop(&self) -> f64 {
        self.xi_stop
    }

    pub fn id(&self) -> String {
        match &self.shape {
            Shape::Meyer => format!("meyer_lowpass({},{})", self.xi_pass, self.xi_stop),
            Shape::Custom { name, .. } => name.clone(),
        }
    }

    /// Radius outside which `|phi(t)|` is below `DEFAULT_DECAY_TOL` of its peak.
    pub fn decay_radius(&self) -> f64 {
        *self.decay.get_or_init(|| {
            profile(|x| Complex64::new(self.fhat(x), 0.0), self.xi_stop)
                .decay_radius(DEFAULT_DECAY_TOL)
        })
    }
}
