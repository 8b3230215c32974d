//! Fourier multipliers: low-pass convolution, Bessel potentials and
//! spectral derivatives.

use num_complex::Complex64;

use super::signal::SampledSignal;
use crate::error::{Error, Result};
use crate::kernels::LowPass;
use crate::spectral::apply_multiplier;

/// `f * phi`, i.e. the multiplier `phi_hat(xi)`.
pub fn lowpass(f: &SampledSignal, phi: &LowPass) -> Result<SampledSignal> {
    let out = apply_multiplier(f.samples(), f.dt(), |x| Complex64::new(phi.fhat(x), 0.0));
    f.with_samples(out)
}

/// `(1 - Laplacian)^{beta/2} f`, the multiplier `(1 + xi^2)^{beta/2}`.
pub fn bessel_potential(f: &SampledSignal, beta: f64) -> Result<SampledSignal> {
    if !beta.is_finite() {
        return Err(Error::Parameter(format!("beta must be finite, got {beta}")));
    }
    let out = apply_multiplier(f.samples(), f.dt(), |x| {
        Complex64::new((1.0 + x * x).powf(0.5 * beta), 0.0)
    });
    f.with_samples(out)
}

/// `d^m f / dt^m` via the multiplier `(i xi)^m`. The Nyquist bin of an odd
/// derivative has no real-valued counterpart and is dropped.
pub fn derivative(f: &SampledSignal, m: u32) -> Result<SampledSignal> {
    if m == 0 {
        return Ok(f.clone());
    }
    let nyquist = std::f64::consts::PI / f.dt();
    let out = apply_multiplier(f.samples(), f.dt(), |x| {
        if m % 2 == 1 && (x - nyquist).abs() <= 1e-9 * nyquist {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, x).powu(m)
        }
    });
    f.with_samples(out)
}
