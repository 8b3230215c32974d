//! Forward wavelet transform, synthesis and reconstruction.
//!
//! The transform at scale `y` is the Fourier multiplier `conj(psi_hat(y xi))`:
//!
//! ```text
//! W f(x, y) = (1/y) int f(t) conj(psi((t - x)/y)) dt
//!           = (1/2pi) int f_hat(xi) conj(psi_hat(y xi)) e^{i xi x} d xi
//! ```
//!
//! and synthesis at scale `y` is the multiplier `eta_hat(y xi)` followed by
//! a trapezoid sum over `ln y`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{Interior, ScaleGrid};
use super::signal::SampledSignal;
use crate::error::{Error, Result};
use crate::kernels::{LPPair, SpectralWavelet};
use crate::spectral::Fourier;

/// `W f(x_i, y_j)` on the signal's x-grid times a log-uniform scale grid.
///
/// Rows (one per scale) are stored contiguously.
#[derive(Clone, Debug, PartialEq)]
pub struct Scalogram {
    t0: f64,
    dt: f64,
    nx: usize,
    grid: ScaleGrid,
    scales: Vec<f64>,
    wavelet: String,
    interior: Interior,
    data: Vec<f64>,
}

/// JSON sidecar accompanying a binary scalogram export.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalogramSidecar {
    pub nx: usize,
    pub ny: usize,
    pub t0: f64,
    pub dt: f64,
    pub scales: Vec<f64>,
    pub layout: String,
    pub wavelet: String,
    pub interior: Interior,
    pub grid: ScaleGrid,
}

const EXPORT_LAYOUT: &str = "row-major [x][scale], f64 little-endian";

impl Scalogram {
    /// Assembles a scalogram from one row per scale of `grid`.
    pub fn from_rows(
        t0: f64,
        dt: f64,
        grid: ScaleGrid,
        rows: Vec<Vec<f64>>,
        wavelet: &str,
        interior: Interior,
    ) -> Result<Self> {
        let scales = grid.values();
        if rows.len() != scales.len() {
            return Err(Error::Shape(format!(
                "{} rows for {} scales",
                rows.len(),
                scales.len()
            )));
        }
        let nx = rows.first().map_or(0, |r| r.len());
        if nx == 0 || rows.iter().any(|r| r.len() != nx) {
            return Err(Error::Shape("rows must be nonempty and of equal length".into()));
        }
        if interior.end > nx || interior.is_empty() {
            return Err(Error::Shape(format!("interior {interior:?} does not fit {nx} columns")));
        }
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("scalogram entries must be finite".into()));
        }
        Ok(Scalogram {
            t0,
            dt,
            nx,
            grid,
            scales,
            wavelet: wavelet.to_string(),
            interior,
            data,
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.scales.len()
    }
    pub fn t0(&self) -> f64 {
        self.t0
    }
    pub fn dt(&self) -> f64 {
        self.dt
    }
    pub fn x(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }
    pub fn scales(&self) -> &[f64] {
        &self.scales
    }
    pub fn grid(&self) -> &ScaleGrid {
        &self.grid
    }
    pub fn wavelet(&self) -> &str {
        &self.wavelet
    }
    pub fn interior(&self) -> Interior {
        self.interior
    }

    /// `W(x_i, y_j)`.
    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.nx + i]
    }

    /// All `x` samples at scale `y_j`.
    pub fn row(&self, j: usize) -> &[f64] {
        &self.data[j * self.nx..(j + 1) * self.nx]
    }

    /// `max_x |W(x, y_j)|` over the interior window.
    pub fn interior_sup(&self, j: usize) -> (f64, usize) {
        let row = self.row(j);
        self.interior.range().fold((0.0, self.interior.start), |(m, at), i| {
            if row[i].abs() > m {
                (row[i].abs(), i)
            } else {
                (m, at)
            }
        })
    }

    fn same_layout(&self, other: &Scalogram) -> Result<()> {
        if self.nx != other.nx
            || self.t0 != other.t0
            || self.dt != other.dt
            || self.scales != other.scales
        {
            return Err(Error::Shape("scalograms live on different grids".into()));
        }
        Ok(())
    }

    /// `a * self + b * other` on a shared grid.
    pub fn combine(&self, a: f64, other: &Scalogram, b: f64) -> Result<Scalogram> {
        self.same_layout(other)?;
        let mut out = self.clone();
        for (o, v) in out.data.iter_mut().zip(&other.data) {
            *o = a * *o + b * v;
        }
        Ok(out)
    }

    pub fn scale(&self, lambda: f64) -> Scalogram {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= lambda);
        out
    }

    /// Row-major `[i][j]` little-endian `f64` matrix: entry `(x_i, y_j)`
    /// sits at offset `8 * (i * ny + j)`.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let ny = self.ny();
        let mut out = Vec::with_capacity(8 * self.nx * ny);
        for i in 0..self.nx {
            for j in 0..ny {
                out.extend_from_slice(&self.value(i, j).to_le_bytes());
            }
        }
        out
    }

    pub fn sidecar(&self) -> ScalogramSidecar {
        ScalogramSidecar {
            nx: self.nx,
            ny: self.ny(),
            t0: self.t0,
            dt: self.dt,
            scales: self.scales.clone(),
            layout: EXPORT_LAYOUT.to_string(),
            wavelet: self.wavelet.clone(),
            interior: self.interior,
            grid: self.grid.clone(),
        }
    }

    /// Inverse of [`to_le_bytes`](Self::to_le_bytes) given the sidecar.
    pub fn from_le_bytes(bytes: &[u8], sidecar: &ScalogramSidecar) -> Result<Scalogram> {
        let (nx, ny) = (sidecar.nx, sidecar.ny);
        if bytes.len() != 8 * nx * ny {
            return Err(Error::Shape(format!(
                "{} bytes do not hold a {nx} x {ny} matrix of f64",
                bytes.len()
            )));
        }
        let mut rows = vec![vec![0.0; nx]; ny];
        for (k, chunk) in bytes.chunks_exact(8).enumerate() {
            rows[k % ny][k / ny] = f64::from_le_bytes(chunk.try_into().expect("chunk of 8"));
        }
        let s = Scalogram::from_rows(sidecar.t0, sidecar.dt, sidecar.grid.clone(), rows, &sidecar.wavelet, sidecar.interior)?;
        if s.scales != sidecar.scales {
            return Err(Error::Shape("sidecar scales disagree with its grid".into()));
        }
        Ok(s)
    }
}

/// Interior window for a transform of `f` with kernels of the given decay radius.
pub(crate) fn interior_for(f: &SampledSignal, grid: &ScaleGrid, decay_radius: f64) -> Result<Interior> {
    Interior::from_margin(f.len(), f.dt(), grid.margin_distance(decay_radius))
}

/// Rows `IDFT(f_hat(xi) * m(y_j xi))` for every scale, restricted to the
/// first `keep` samples of the padded output.
pub(crate) fn multiplier_rows<M>(
    spectrum: &[Complex64],
    fourier: &Fourier,
    xi: &[f64],
    scales: &[f64],
    keep: usize,
    m: M,
) -> Vec<Vec<f64>>
where
    M: Fn(f64) -> Complex64 + Sync,
{
    scales
        .par_iter()
        .map_init(
            || (vec![0.0; fourier.len()], fourier.scratch(), vec![Complex64::new(0.0, 0.0); xi.len()]),
            |(out, scratch, spec), &y| {
                for ((s, f), &x) in spec.iter_mut().zip(spectrum).zip(xi) {
                    *s = f * m(y * x);
                }
                fourier.inverse_into(spec, out, scratch);
                out[..keep].to_vec()
            },
        )
        .collect()
}

/// Continuous wavelet transform of `f` on `grid`.
pub fn cwt_forward(f: &SampledSignal, psi: &SpectralWavelet, grid: &ScaleGrid) -> Result<Scalogram> {
    f.require_transform_len()?;
    grid.check_nyquist(f.dt())?;
    let interior = interior_for(f, grid, psi.decay_radius())?;
    let fourier = Fourier::padded_for(f.len());
    let xi = fourier.frequencies(f.dt());
    let spectrum = fourier.forward(f.samples());
    let scales = grid.values();
    let rows = multiplier_rows(&spectrum, &fourier, &xi, &scales, f.len(), |x| psi.fhat(x).conj());
    Scalogram::from_rows(f.t0(), f.dt(), grid.clone(), rows, &psi.id(), interior)
}

/// Wavelet synthesis `M_eta Phi`, truncated to the scales of `phi`.
pub fn synthesize(phi: &Scalogram, eta: &SpectralWavelet) -> Result<SampledSignal> {
    let fourier = Fourier::padded_for(phi.nx());
    let xi = fourier.frequencies(phi.dt());
    let weights = phi.grid().quadrature_weights();
    if weights.len() != phi.ny() {
        return Err(Error::Shape("scale weights do not match the scalogram".into()));
    }
    let bins = fourier.bins();
    let mut total = vec![Complex64::new(0.0, 0.0); bins];
    // Rows are transformed in parallel blocks and summed in scale order,
    // which keeps the result independent of the thread count.
    let block = rayon::current_num_threads().max(1) * 2;
    let scales = phi.scales();
    for start in (0..phi.ny()).step_by(block) {
        let end = (start + block).min(phi.ny());
        let spectra: Vec<Vec<Complex64>> = (start..end)
            .into_par_iter()
            .map(|j| {
                let y = scales[j];
                let mut spec = fourier.forward(phi.row(j));
                for (s, &x) in spec.iter_mut().zip(&xi) {
                    *s *= eta.fhat(y * x) * weights[j];
                }
                spec
            })
            .collect();
        for spec in spectra {
            for (t, s) in total.iter_mut().zip(spec) {
                *t += s;
            }
        }
    }
    let mut out = fourier.inverse(total);
    out.truncate(phi.nx());
    SampledSignal::new(out, phi.t0(), phi.dt())
}

/// `(1/c) M_eta W_psi f` and its relative sup error against `f` on the
/// interior window.
pub fn reconstruct(f: &SampledSignal, pair: &LPPair, grid: &ScaleGrid) -> Result<(SampledSignal, f64)> {
    let c = pair.c();
    if !(c.is_finite() && c != 0.0) {
        return Err(Error::Configuration(format!("admissibility constant {c} is not usable")));
    }
    let w = cwt_forward(f, pair.psi(), grid)?;
    let rec = synthesize(&w, pair.eta())?.scale(1.0 / c);
    let interior = w.interior();
    let scale = f.sup_abs(interior.start, interior.end);
    let diff = interior
        .range()
        .map(|i| (rec.samples()[i] - f.samples()[i]).abs())
        .fold(0.0, f64::max);
    let err = if scale == 0.0 {
        if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        diff / scale
    };
    Ok((rec, err))
}
