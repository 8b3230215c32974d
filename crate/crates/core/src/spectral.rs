//! Zero-padded real FFT plumbing shared by the transforms.
//!
//! A signal of length `n` is padded with zeros to `len >= 2n` (a power of
//! two) before transforming. Only the non-negative half of the spectrum is
//! stored; the negative half is implied by Hermitian symmetry, which is what
//! keeps every multiplier output real.

use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};

fn planner() -> &'static Mutex<RealFftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<RealFftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(RealFftPlanner::new()))
}

/// Forward and inverse real transforms of one padded length.
#[derive(Clone)]
pub(crate) struct Fourier {
    len: usize,
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
}

impl Fourier {
    pub fn new(len: usize) -> Self {
        assert!(len >= 2 && len % 2 == 0, "padded length must be even");
        let mut p = planner().lock().unwrap_or_else(|e| e.into_inner());
        let r2c = p.plan_fft_forward(len);
        let c2r = p.plan_fft_inverse(len);
        Fourier { len, r2c, c2r }
    }

    /// Plan for a signal of `n` samples: padded length `>= 2n`.
    pub fn padded_for(n: usize) -> Self {
        Self::new((2 * n).next_power_of_two().max(16))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn bins(&self) -> usize {
        self.len / 2 + 1
    }

    /// Angular frequencies `2 pi k / (len dt)` of the stored bins.
    pub fn frequencies(&self, dt: f64) -> Vec<f64> {
        let step = 2.0 * PI / (self.len as f64 * dt);
        (0..self.bins()).map(|k| k as f64 * step).collect()
    }

    pub fn scratch(&self) -> Vec<Complex64> {
        let n = self
            .r2c
            .get_scratch_len()
            .max(self.c2r.get_scratch_len());
        vec![Complex64::new(0.0, 0.0); n]
    }

    /// Spectrum of `samples` zero-padded to the plan length.
    pub fn forward(&self, samples: &[f64]) -> Vec<Complex64> {
        debug_assert!(samples.len() <= self.len);
        let mut buf = vec![0.0; self.len];
        buf[..samples.len()].copy_from_slice(samples);
        let mut out = self.r2c.make_output_vec();
        let mut scratch = self.scratch();
        self.r2c
            .process_with_scratch(&mut buf, &mut out, &mut scratch)
            .expect("buffer lengths match the plan");
        out
    }

    /// Inverse transform with `1/len` normalisation. The imaginary parts of
    /// the zero and Nyquist bins are discarded, which completes the
    /// Hermitian symmetrisation. `spectrum` is used as workspace.
    pub fn inverse_into(
        &self,
        spectrum: &mut [Complex64],
        out: &mut [f64],
        scratch: &mut [Complex64],
    ) {
        debug_assert_eq!(spectrum.len(), self.bins());
        debug_assert_eq!(out.len(), self.len);
        spectrum[0].im = 0.0;
        let last = spectrum.len() - 1;
        spectrum[last].im = 0.0;
        self.c2r
            .process_with_scratch(spectrum, out, scratch)
            .expect("buffer lengths match the plan");
        let scale = 1.0 / self.len as f64;
        for v in out.iter_mut() {
            *v *= scale;
        }
    }

    pub fn inverse(&self, mut spectrum: Vec<Complex64>) -> Vec<f64> {
        let mut out = vec![0.0; self.len];
        let mut scratch = self.scratch();
        self.inverse_into(&mut spectrum, &mut out, &mut scratch);
        out
    }
}

/// Applies the Fourier multiplier `m(xi)` to `samples` on a padded grid and
/// returns the first `samples.len()` output samples.
pub(crate) fn apply_multiplier<F>(samples: &[f64], dt: f64, m: F) -> Vec<f64>
where
    F: Fn(f64) -> Complex64,
{
    let fourier = Fourier::padded_for(samples.len());
    let xi = fourier.frequencies(dt);
    let mut spec = fourier.forward(samples);
    for (s, &x) in spec.iter_mut().zip(&xi) {
        *s *= m(x);
    }
    let mut out = fourier.inverse(spec);
    out.truncate(samples.len());
    out
}
