//! Time-domain profile of a spectrally defined kernel.
//!
//! The inverse Fourier integral `(1/2pi) int g(xi) e^{i xi t} d xi` is
//! evaluated on a uniform `t` grid with a single complex FFT. The integrand
//! is smooth and (numerically) compactly supported, so the trapezoid sum is
//! accurate to rounding; the only approximation is periodisation in `t`,
//! whose period is far beyond the decay lengths of interest.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

const PROFILE_POINTS: usize = 1 << 16;

/// Magnitude of the kernel at `|t| = j * dt_t`, symmetrised over `+-t`.
pub(crate) struct Profile {
    pub dt: f64,
    pub magnitude: Vec<f64>,
}

pub(crate) fn profile<F>(g: F, extent: f64) -> Profile
where
    F: Fn(f64) -> Complex64,
{
    let k = PROFILE_POINTS;
    let dxi = 4.0 * extent / k as f64;
    let mut buf: Vec<Complex64> = (0..k)
        .map(|j| {
            let idx = if j < k / 2 { j as f64 } else { j as f64 - k as f64 };
            g(idx * dxi) * (dxi / (2.0 * PI))
        })
        .collect();
    FftPlanner::new().plan_fft_inverse(k).process(&mut buf);
    let dt = 2.0 * PI / (k as f64 * dxi);
    // Keep a quarter period on each side; the rest is too close to the
    // periodic images to be trusted.
    let half = k / 4;
    let magnitude = (0..half)
        .map(|j| buf[j].norm().max(buf[(k - j) % k].norm()))
        .collect();
    Profile { dt, magnitude }
}

impl Profile {
    /// Smallest `R` with `|g(t)| <= tol * max |g|` for every `|t| >= R`.
    pub fn decay_radius(&self, tol: f64) -> f64 {
        let peak = self.magnitude.iter().cloned().fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let last = self
            .magnitude
            .iter()
            .rposition(|&m| m > tol * peak)
            .unwrap_or(0);
        (last + 1) as f64 * self.dt
    }
}
