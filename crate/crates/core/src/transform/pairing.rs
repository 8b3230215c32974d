//! Littlewood-Paley evaluation of the pairing `<f, theta> = int f theta`.
//!
//! With a smooth cutoff `chi` equal to 1 on `|xi| <= sigma` and vanishing
//! before `r`, split `theta_hat = theta_hat chi + theta_hat (1 - chi)`:
//!
//! ```text
//! <f, theta> = int (f * phi) theta_1 + (1/c) int int W_psi f  W_conj(eta) theta_2  dx dy/y
//! theta_1_hat = theta_hat chi / phi_hat(-xi),   theta_2_hat = theta_hat (1 - chi)
//! ```
//!
//! `W_conj(eta) theta_2(., y)` vanishes once `y > eta.support_hi / sigma`;
//! the scale integral runs up to `max(1, eta.support_hi / sigma)` so that
//! pairs whose `eta` reaches past `sigma` stay exact.

use num_complex::Complex64;
use serde::Serialize;

use super::cwt::multiplier_rows;
use super::grid::ScaleGrid;
use super::signal::SampledSignal;
use crate::error::{Error, Result};
use crate::kernels::LPPair;
use crate::smooth::theta;
use crate::spectral::Fourier;

/// Both sides of the pairing identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairingReport {
    /// `lowpass_term + wavelet_term`.
    pub value: f64,
    pub lowpass_term: f64,
    pub wavelet_term: f64,
    /// `int f theta` by the rectangle rule on the samples.
    pub direct: f64,
    /// Largest scale of the wavelet integral.
    pub y_top: f64,
    pub scales: usize,
}

impl PairingReport {
    pub fn relative_error(&self) -> f64 {
        (self.value - self.direct).abs() / self.direct.abs()
    }
}

fn cutoff(xi: f64, sigma: f64, edge: f64) -> f64 {
    theta((edge - xi.abs()) / (edge - sigma))
}

/// Evaluates the right side of the pairing identity for `pair`.
pub fn lp_pairing(
    f: &SampledSignal,
    theta_sig: &SampledSignal,
    pair: &LPPair,
    grid: &ScaleGrid,
) -> Result<PairingReport> {
    f.require_same_grid(theta_sig)?;
    f.require_transform_len()?;
    let dt = f.dt();
    let sigma = pair.sigma();
    let edge = 0.5 * (sigma + pair.r());
    let phi = pair.phi();

    // Division by phi_hat on supp chi = [-edge, edge].
    let probe = 4096;
    let min_phi = (0..=probe)
        .map(|k| phi.fhat(edge * k as f64 / probe as f64).abs().min(phi.fhat(-edge * k as f64 / probe as f64).abs()))
        .fold(f64::INFINITY, f64::min);
    if !(min_phi > 1e-12) {
        return Err(Error::Division(format!(
            "phi_hat reaches {min_phi:e} inside the cutoff support |xi| <= {edge}"
        )));
    }

    let fourier = Fourier::padded_for(f.len());
    let xi = fourier.frequencies(dt);
    let f_hat = fourier.forward(f.samples());
    let t_hat = fourier.forward(theta_sig.samples());
    let padded = fourier.len();

    let sum_product = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * dt;

    // Low-pass term on the whole padded circle.
    let mut fphi: Vec<Complex64> = f_hat.iter().zip(&xi).map(|(v, &x)| v * phi.fhat(x)).collect();
    let mut t1: Vec<Complex64> = t_hat
        .iter()
        .zip(&xi)
        .map(|(v, &x)| {
            let chi = cutoff(x, sigma, edge);
            if chi == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                v * (chi / phi.fhat(-x))
            }
        })
        .collect();
    let mut scratch = fourier.scratch();
    let mut a = vec![0.0; padded];
    let mut b = vec![0.0; padded];
    fourier.inverse_into(&mut fphi, &mut a, &mut scratch);
    fourier.inverse_into(&mut t1, &mut b, &mut scratch);
    let lowpass_term = sum_product(&a, &b);

    // Wavelet term.
    let theta2: Vec<Complex64> =
        t_hat.iter().zip(&xi).map(|(v, &x)| v * (1.0 - cutoff(x, sigma, edge))).collect();
    let y_top = 1f64.max(pair.eta().support_hi() / sigma);
    let scale_grid = if y_top > grid.y_min {
        // Anchor the grid at y_min so the finest scale is exactly y_min.
        let steps = (grid.voices as f64 * (y_top / grid.y_min).log2() - 1e-9).ceil();
        let top = grid.y_min * 2f64.powf(steps / grid.voices as f64);
        ScaleGrid::new(grid.y_min, top, grid.voices)?
    } else {
        return Err(Error::Parameter(format!(
            "y_min {} must lie below the top scale {y_top}",
            grid.y_min
        )));
    };
    scale_grid.check_nyquist(dt)?;
    let scales = scale_grid.values();
    let weights = scale_grid.quadrature_weights();
    let psi = pair.psi();
    let eta_bar = pair.eta().conjugate();
    let wf = multiplier_rows(&f_hat, &fourier, &xi, &scales, padded, |x| psi.fhat(x).conj());
    let wt = multiplier_rows(&theta2, &fourier, &xi, &scales, padded, |x| eta_bar.fhat(x).conj());
    let wavelet_term = wf
        .iter()
        .zip(&wt)
        .zip(&weights)
        .map(|((r1, r2), w)| w * sum_product(r1, r2))
        .sum::<f64>()
        / pair.c();

    let direct = sum_product(f.samples(), theta_sig.samples());
    Ok(PairingReport {
        value: lowpass_term + wavelet_term,
        lowpass_term,
        wavelet_term,
        direct,
        y_top,
        scales: scales.len(),
    })
}
