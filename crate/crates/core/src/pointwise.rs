//! Pointwise regularity: mollified point values, cone scans of the wavelet
//! transform around a point, and log-log fits of scalogram decay.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::SpectralWavelet;
use crate::smooth::bump;
use crate::spectral::Fourier;
use crate::transform::{SampledSignal, Scalogram};
use crate::weights::SlowlyVaryingWeight;

/// Tolerance of the Cauchy and agreement tests in [`point_value`].
pub const POINT_VALUE_TOL: f64 = 1e-3;

const MOLLIFIERS: [(&str, f64); 3] = [("symmetric", 0.0), ("left", -0.8), ("right", 0.8)];

/// Mollified means `<f, eps^-1 phi((. - x0)/eps)>` for three mollifiers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointValueReport {
    pub x0: f64,
    pub eps: Vec<f64>,
    /// One sequence per mollifier, in the order of `mollifiers`.
    pub means: Vec<Vec<f64>>,
    pub mollifiers: Vec<String>,
    /// `None` when a sequence fails to settle or the limits disagree.
    pub value: Option<f64>,
}

/// Point value of `f` at `x0` as the common limit of mollified means.
///
/// The mollifiers are `bump(t) (1 + s t)` for `s = 0, -0.8, 0.8`, each
/// normalised to unit mass on the sample grid. A value is returned when
/// every sequence moves by at most [`POINT_VALUE_TOL`] over the last three
/// `eps` and the three limits agree to the same tolerance.
pub fn point_value(f: &SampledSignal, x0: f64, eps_grid: &[f64]) -> Result<PointValueReport> {
    if eps_grid.len() < 3 {
        return Err(Error::Parameter("point values need at least three eps".into()));
    }
    if eps_grid.windows(2).any(|w| !(w[1] < w[0])) || eps_grid.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::Parameter("eps_grid must be positive and strictly decreasing".into()));
    }
    let dt = f.dt();
    let finest = *eps_grid.last().expect("nonempty");
    if finest < 4.0 * dt * (1.0 - 1e-12) {
        return Err(Error::Parameter(format!("eps = {finest} is below 4 dt = {}", 4.0 * dt)));
    }
    let reach = eps_grid[0];
    if !(x0 - reach >= f.t0() && x0 + reach <= f.t_last()) {
        return Err(Error::Domain(format!(
            "x0 = {x0} is not interior: needs [{}, {}] inside the window",
            x0 - reach,
            x0 + reach
        )));
    }
    let means: Vec<Vec<f64>> = MOLLIFIERS
        .iter()
        .map(|&(_, skew)| {
            eps_grid
                .iter()
                .map(|&eps| {
                    let lo = ((x0 - eps - f.t0()) / dt).floor().max(0.0) as usize;
                    let hi = (((x0 + eps - f.t0()) / dt).ceil() as usize).min(f.len() - 1);
                    let (mut num, mut den) = (0.0, 0.0);
                    for i in lo..=hi {
                        let u = (f.t(i) - x0) / eps;
                        let w = bump(u) * (1.0 + skew * u);
                        num += w * f.samples()[i];
                        den += w;
                    }
                    num / den
                })
                .collect()
        })
        .collect();
    let settled = means.iter().all(|m| {
        let tail = &m[m.len() - 3..];
        let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
        hi - lo <= POINT_VALUE_TOL
    });
    let last: Vec<f64> = means.iter().map(|m| *m.last().expect("nonempty")).collect();
    let spread = last.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - last.iter().cloned().fold(f64::INFINITY, f64::min);
    let value = (settled && spread <= POINT_VALUE_TOL).then(|| last.iter().sum::<f64>() / 3.0);
    Ok(PointValueReport {
        x0,
        eps: eps_grid.to_vec(),
        means,
        mollifiers: MOLLIFIERS.iter().map(|m| m.0.to_string()).collect(),
        value,
    })
}

/// Angles sampled on the upper half circle.
pub const CONE_ANGLES: usize = 64;
/// Points of the half circle with `y` below this are excluded.
pub const CONE_Y_FLOOR: f64 = 0.05;

/// Per-`eps` suprema of the cone condition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeScanResult {
    pub x0: f64,
    pub alpha: f64,
    pub weight: String,
    pub k: u32,
    pub wavelet: String,
    pub eps_grid: Vec<f64>,
    /// `max y^k |W f(x0 + eps x, eps y)| / (eps^alpha L(eps))` over the
    /// sampled half circle.
    pub sup_values: Vec<f64>,
    /// Largest entry of the last third of `sup_values`.
    pub limsup_estimate: f64,
    /// Least-squares slope of `ln sup` against `ln eps`; negative values
    /// mean growth as `eps -> 0`.
    pub log_log_slope: f64,
    pub angles: usize,
    pub y_floor: f64,
    /// Angles dropped at every `eps` because `y < y_floor`.
    pub excluded_angles: usize,
    /// Per `eps`, further points dropped because `eps y < 2 dt`.
    pub unresolved: Vec<usize>,
}

/// Direct evaluation of `W f(b, s)` from a precomputed spectrum.
struct PointEvaluator {
    spectrum: Vec<Complex64>,
    xi: Vec<f64>,
    t0: f64,
    len: usize,
}

impl PointEvaluator {
    fn new(f: &SampledSignal) -> Self {
        let fourier = Fourier::padded_for(f.len());
        PointEvaluator {
            spectrum: fourier.forward(f.samples()),
            xi: fourier.frequencies(f.dt()),
            t0: f.t0(),
            len: fourier.len(),
        }
    }

    /// `(1/P) sum_k F_k conj(psi_hat(s xi_k)) e^{i xi_k (b - t0)}` over the
    /// full circle of frequencies.
    fn eval(&self, psi: &SpectralWavelet, b: f64, s: f64) -> Complex64 {
        let u = b - self.t0;
        let last = self.xi.len() - 1;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, (&fk, &x)) in self.spectrum.iter().zip(&self.xi).enumerate() {
            let pos = psi.fhat(s * x).conj();
            let neg = if k == 0 { Complex64::new(0.0, 0.0) } else { psi.fhat(-s * x).conj() };
            if pos == Complex64::new(0.0, 0.0) && neg == Complex64::new(0.0, 0.0) {
                continue;
            }
            let e = Complex64::from_polar(1.0, x * u);
            let term = if k == 0 {
                fk * pos
            } else {
                let both = fk * pos * e + fk.conj() * neg * e.conj();
                if k == last && self.len % 2 == 0 {
                    0.5 * both
                } else {
                    both
                }
            };
            acc += term;
        }
        acc / self.len as f64
    }
}

/// Cone scan around `x0`: for each `eps`, the weighted supremum of the
/// wavelet transform over the half circle of radius `eps`.
#[allow(clippy::too_many_arguments)]
pub fn cone_scan(
    f: &SampledSignal,
    psi: &SpectralWavelet,
    x0: f64,
    alpha: f64,
    weight: &SlowlyVaryingWeight,
    k: u32,
    eps_grid: &[f64],
) -> Result<ConeScanResult> {
    weight.validate()?;
    f.require_transform_len()?;
    if !alpha.is_finite() {
        return Err(Error::Parameter(format!("alpha must be finite, got {alpha}")));
    }
    if alpha >= 0.0 && !psi.vanishing_moments().covers(alpha.floor() as u32) {
        return Err(Error::Configuration(format!(
            "{} has {:?} vanishing moments; alpha = {alpha} needs moments through {}",
            psi.id(),
            psi.vanishing_moments(),
            alpha.floor()
        )));
    }
    if eps_grid.is_empty()
        || eps_grid.iter().any(|e| !(*e > 0.0 && *e <= 1.0))
        || eps_grid.windows(2).any(|w| !(w[1] < w[0]))
    {
        return Err(Error::Parameter("eps_grid must be strictly decreasing in (0, 1]".into()));
    }
    if !(x0 >= f.t0() && x0 <= f.t_last()) {
        return Err(Error::Domain(format!("x0 = {x0} lies outside the sampling window")));
    }
    let evaluator = PointEvaluator::new(f);
    let guard = 2.0 * f.dt();
    let points: Vec<(f64, f64)> = (0..CONE_ANGLES)
        .map(|a| {
            let th = std::f64::consts::PI * (a as f64 + 0.5) / CONE_ANGLES as f64;
            (th.cos(), th.sin())
        })
        .filter(|p| p.1 >= CONE_Y_FLOOR)
        .collect();
    let excluded_angles = CONE_ANGLES - points.len();

    let per_eps: Vec<(f64, usize)> = eps_grid
        .par_iter()
        .map(|&eps| {
            let norm = eps.powf(alpha) * weight.value(eps);
            let mut best = 0.0f64;
            let mut unresolved = 0;
            let mut used = 0;
            for &(x, y) in &points {
                if eps * y < guard {
                    unresolved += 1;
                    continue;
                }
                used += 1;
                let w = evaluator.eval(psi, x0 + eps * x, eps * y).norm();
                best = best.max(y.powi(k as i32) * w / norm);
            }
            (if used == 0 { f64::NAN } else { best }, unresolved)
        })
        .collect();
    if let Some(i) = per_eps.iter().position(|p| p.0.is_nan()) {
        return Err(Error::Grid(format!(
            "no half-circle point is resolvable at eps = {} (dt = {})",
            eps_grid[i],
            f.dt()
        )));
    }
    let sup_values: Vec<f64> = per_eps.iter().map(|p| p.0).collect();
    let tail = sup_values.len().div_ceil(3);
    let limsup_estimate = sup_values[sup_values.len() - tail..].iter().cloned().fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = eps_grid
        .iter()
        .zip(&sup_values)
        .filter(|(_, s)| **s > 0.0)
        .map(|(e, s)| (e.ln(), s.ln()))
        .collect();
    let log_log_slope = slope(&pts);
    Ok(ConeScanResult {
        x0,
        alpha,
        weight: weight.to_string(),
        k,
        wavelet: psi.id(),
        eps_grid: eps_grid.to_vec(),
        sup_values,
        limsup_estimate,
        log_log_slope,
        angles: CONE_ANGLES,
        y_floor: CONE_Y_FLOOR,
        excluded_angles,
        unresolved: per_eps.iter().map(|p| p.1).collect(),
    })
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Where a [`RegularityReport`] took its suprema.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FitMode {
    Global,
    Pointwise { x0: f64, cone_width: f64 },
}

/// Fitted decay `M(y) ~ y^alpha_hat (1 + |ln y|)^beta_hat`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityReport {
    pub alpha_hat: f64,
    pub beta_hat: f64,
    /// Root-mean-square of the regression residuals in `ln M`.
    pub residual: f64,
    /// Smallest and largest scale used.
    pub scale_range: [f64; 2],
    pub scales_used: usize,
    pub log_basis: bool,
    pub mode: FitMode,
}

/// Minimum number of scales a fit may use.
pub const MIN_FIT_SCALES: usize = 8;

fn scales_in(s: &Scalogram, range: (f64, f64)) -> Result<Vec<usize>> {
    let (lo, hi) = range;
    if !(lo > 0.0 && lo < hi) {
        return Err(Error::Parameter(format!("scale range needs 0 < y_lo < y_hi, got ({lo}, {hi})")));
    }
    let js: Vec<usize> = s
        .scales()
        .iter()
        .enumerate()
        .filter(|(_, &y)| y >= lo * (1.0 - 1e-9) && y <= hi * (1.0 + 1e-9))
        .map(|(j, _)| j)
        .collect();
    if js.len() < MIN_FIT_SCALES {
        return Err(Error::Parameter(format!(
            "scale range ({lo}, {hi}) holds {} scales; at least {MIN_FIT_SCALES} are needed",
            js.len()
        )));
    }
    Ok(js)
}

/// Least squares of `ln M` on `{1, ln y}` or `{1, ln y, ln(1 + |ln y|)}`.
fn regress(ys: &[f64], ms: &[f64], log_basis: bool, mode: FitMode) -> Result<RegularityReport> {
    let bad = ms.iter().filter(|m| !(**m > 0.0)).count();
    if bad * 5 > ms.len() {
        return Err(Error::DegenerateSignal(format!(
            "{bad} of {} scale maxima are not positive",
            ms.len()
        )));
    }
    let (y, m): (Vec<f64>, Vec<f64>) = ys.iter().zip(ms).filter(|(_, m)| **m > 0.0).map(|(y, m)| (*y, *m)).unzip();
    let cols = if log_basis { 3 } else { 2 };
    let a = DMatrix::from_fn(y.len(), cols, |i, c| match c {
        0 => 1.0,
        1 => y[i].ln(),
        _ => y[i].ln().abs().ln_1p(),
    });
    let b = DVector::from_iterator(m.len(), m.iter().map(|v| v.ln()));
    let coef = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::Numeric(format!("regression failed: {e}")))?;
    let r = &a * &coef - &b;
    let residual = (r.norm_squared() / r.len() as f64).sqrt();
    let lo = y.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = y.iter().cloned().fold(0.0, f64::max);
    Ok(RegularityReport {
        alpha_hat: coef[1],
        beta_hat: if log_basis { coef[2] } else { 0.0 },
        residual,
        scale_range: [lo, hi],
        scales_used: y.len(),
        log_basis,
        mode,
    })
}

/// Fits the decay of `M(y) = max_x |W(x, y)|` over the interior.
pub fn fit_regularity(s: &Scalogram, log_basis: bool, scale_range: (f64, f64)) -> Result<RegularityReport> {
    let js = scales_in(s, scale_range)?;
    let ys: Vec<f64> = js.iter().map(|&j| s.scales()[j]).collect();
    let ms: Vec<f64> = js.iter().map(|&j| s.interior_sup(j).0).collect();
    regress(&ys, &ms, log_basis, FitMode::Global)
}

/// Same fit with `M(y)` taken over the cone `|x - x0| <= cone_width y`.
pub fn pointwise_fit(
    s: &Scalogram,
    x0: f64,
    cone_width: f64,
    log_basis: bool,
    scale_range: (f64, f64),
) -> Result<RegularityReport> {
    if !(cone_width > 0.0 && cone_width.is_finite()) {
        return Err(Error::Parameter(format!("cone width must be positive, got {cone_width}")));
    }
    let js = scales_in(s, scale_range)?;
    let interior = s.interior();
    let mut ys = Vec::with_capacity(js.len());
    let mut ms = Vec::with_capacity(js.len());
    for &j in &js {
        let y = s.scales()[j];
        let half = cone_width * y;
        let lo = ((x0 - half - s.t0()) / s.dt()).ceil().max(interior.start as f64) as usize;
        let hi = (((x0 + half - s.t0()) / s.dt()).floor()).min(interior.end as f64 - 1.0);
        if hi < lo as f64 {
            return Err(Error::Grid(format!(
                "cone |x - {x0}| <= {half} holds no interior sample at y = {y}"
            )));
        }
        let row = s.row(j);
        ys.push(y);
        ms.push((lo..=hi as usize).map(|i| row[i].abs()).fold(0.0, f64::max));
    }
    regress(&ys, &ms, log_basis, FitMode::Pointwise { x0, cone_width })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::make_band_bump;
    use crate::transform::{cwt_forward, Interior, Margin, ScaleGrid};

    fn synthetic(m: impl Fn(f64) -> f64) -> Scalogram {
        let grid = ScaleGrid::new(2f64.powi(-10), 1.0, 4).unwrap();
        let rows = grid.values().iter().map(|&y| vec![0.5 * m(y), -m(y), 0.25 * m(y), 0.0]).collect();
        Scalogram::from_rows(0.0, 1.0, grid, rows, "synthetic", Interior::full(4)).unwrap()
    }

    #[test]
    fn exact_power_laws() {
        let r = fit_regularity(&synthetic(|y| y.powf(0.7)), true, (1e-3, 1.0)).unwrap();
        assert!((r.alpha_hat - 0.7).abs() < 1e-10 && r.beta_hat.abs() < 1e-10 && r.residual < 1e-10, "{r:?}");
        let r = fit_regularity(&synthetic(|y| y.sqrt() * (1.0 + y.ln().abs())), true, (1e-3, 1.0)).unwrap();
        assert!((r.alpha_hat - 0.5).abs() < 1e-10 && (r.beta_hat - 1.0).abs() < 1e-10, "{r:?}");
        assert!(r.residual < 1e-10);
        let r = pointwise_fit(&synthetic(|y| y.powf(0.3)), 1.0, 1.0, false, (1e-3, 1.0)).unwrap();
        assert!((r.alpha_hat - 0.3).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn too_few_scales_or_zeros() {
        let s = synthetic(|y| y);
        assert!(matches!(fit_regularity(&s, false, (0.5, 1.0)), Err(Error::Parameter(_))));
        let z = synthetic(|_| 0.0);
        assert!(matches!(fit_regularity(&z, false, (1e-3, 1.0)), Err(Error::DegenerateSignal(_))));
        assert!(matches!(pointwise_fit(&s, 100.0, 0.01, false, (1e-3, 1.0)), Err(Error::Grid(_))));
    }

    #[test]
    fn point_values() {
        let f = SampledSignal::on_window(-0.01, 0.01, 20001, |t| (t + 0.3).cos()).unwrap();
        let eps = [4e-3, 2e-3, 1e-3, 5e-4];
        let r = point_value(&f, 0.0, &eps).unwrap();
        assert!((r.value.unwrap() - 0.3f64.cos()).abs() < 1e-3, "{r:?}");

        let jump = SampledSignal::on_window(-0.01, 0.01, 20001, |t| t.signum()).unwrap();
        assert_eq!(point_value(&jump, 0.0, &eps).unwrap().value, None);

        let eps = [4e-6, 2e-6, 1e-6, 5e-7];
        let cusp = SampledSignal::on_window(-1e-5, 1e-5, 20001, |t| t.abs().sqrt()).unwrap();
        let r = point_value(&cusp, 0.0, &eps).unwrap();
        assert!(r.value.unwrap().abs() < 1e-3, "{r:?}");
    }

    #[test]
    fn point_value_domain() {
        let f = SampledSignal::on_window(-1.0, 1.0, 2001, |t| t).unwrap();
        assert!(matches!(point_value(&f, 0.95, &[0.1, 0.05, 0.025]), Err(Error::Domain(_))));
        assert!(matches!(point_value(&f, 0.0, &[0.1, 0.05, 0.001]), Err(Error::Parameter(_))));
    }

    #[test]
    fn point_evaluation_matches_fft_transform() {
        let f = SampledSignal::on_window(-32.0, 32.0, 4096, |t| (-0.1 * t * t).exp() * (4.0 * t).sin()).unwrap();
        let psi = make_band_bump(2.0, 8.0).unwrap();
        let grid = ScaleGrid::new(0.25, 1.0, 4).unwrap().with_margin(Margin::Fixed(4.0)).unwrap();
        let w = cwt_forward(&f, &psi, &grid).unwrap();
        let ev = PointEvaluator::new(&f);
        for (i, j) in [(2048, 0), (1500, 3), (2500, 8)] {
            let direct = ev.eval(&psi, w.x(i), w.scales()[j]);
            assert!((direct.re - w.value(i, j)).abs() < 1e-12, "{direct} vs {}", w.value(i, j));
            assert!(direct.im.abs() < 1e-12);
        }
    }

    #[test]
    fn cone_scan_of_zero_and_moment_check() {
        let f = SampledSignal::on_window(-4.0, 4.0, 2048, |_| 0.0).unwrap();
        let psi = make_band_bump(2.0, 8.0).unwrap();
        let r = cone_scan(&f, &psi, 0.0, 0.5, &SlowlyVaryingWeight::constant(), 1, &[0.5, 0.25, 0.125]).unwrap();
        assert!(r.sup_values.iter().all(|v| *v == 0.0));
        assert_eq!(r.excluded_angles, 2);
        let gd = SpectralWavelet::gaussian_derivative(1).unwrap();
        let e = cone_scan(&f, &gd, 0.0, 1.5, &SlowlyVaryingWeight::constant(), 1, &[0.5, 0.25]);
        assert!(matches!(e, Err(Error::Configuration(_))));
    }
}
