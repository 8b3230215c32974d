//! Weighted Hölder-Zygmund norms and the seminorms of the test-function
//! spaces, evaluated as maxima over declared grids.
//!
//! Every supremum is taken over an interior window of the sampling grid.
//! Derivatives are spectral, so signals should vanish (or be tapered)
//! near both window edges.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{validate_lp_pair, LPPair};
use crate::spectral::apply_multiplier;
use crate::transform::{
    cwt_forward, derivative, lowpass, Interior, Margin, SampledSignal, ScaleGrid, Scalogram,
};
use crate::weights::SlowlyVaryingWeight;

/// Lag pairs visited by the difference quotients.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LagSampling {
    /// Largest lag in samples, `floor(1 / dt)`.
    pub max_lag: usize,
    /// Lags `1..=dense_up_to` are all visited.
    pub dense_up_to: usize,
    /// Growth factor of the sparse lags beyond `dense_up_to`, if any.
    pub ratio: Option<f64>,
    pub lags_used: usize,
    /// Number of `(t, h)` quotients evaluated.
    pub pairs: usize,
}

/// Where the suprema of a [`NormReport`] were taken.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormGrid {
    pub dt: f64,
    /// First and last interior sample positions.
    pub x_range: [f64; 2],
    pub interior: Interior,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scales: Option<ScaleGrid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lags: Option<LagSampling>,
}

/// A norm value with its named parts and the grid points attaining them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormReport {
    pub value: f64,
    pub components: BTreeMap<String, f64>,
    /// `[x]`, `[x, y]` or `[t, h]` per component.
    pub argmax: BTreeMap<String, Vec<f64>>,
    pub grid: NormGrid,
}

fn norm_grid(f: &SampledSignal, interior: Interior) -> NormGrid {
    NormGrid {
        dt: f.dt(),
        x_range: [f.t(interior.start), f.t(interior.end - 1)],
        interior,
        scales: None,
        lags: None,
    }
}

/// `(max |v_i|, argmax)` over `range`; ties resolve to the first index.
fn sup_at(v: &[f64], range: std::ops::Range<usize>) -> (f64, usize) {
    let start = range.start;
    range.fold((0.0, start), |(m, at), i| if v[i].abs() > m { (v[i].abs(), i) } else { (m, at) })
}

/// Weighted Zygmund norm `sup |f * phi| + sup |W_psi f(x, y)| / (y^alpha L(y))`.
///
/// With [`Margin::Auto`] the interior keeps `max(y_max r_psi, r_phi)` from
/// each edge, `r` being the decay radii of the kernels.
pub fn zygmund_norm(
    f: &SampledSignal,
    pair: &LPPair,
    weight: &SlowlyVaryingWeight,
    alpha: f64,
    grid: &ScaleGrid,
) -> Result<NormReport> {
    weight.validate()?;
    let validation = validate_lp_pair(pair, alpha);
    if !validation.passed() {
        return Err(Error::Configuration(format!(
            "pair {} is not valid at alpha = {alpha}: {}",
            pair.id(),
            validation.failures()
        )));
    }
    if grid.y_max > 1.0 {
        return Err(Error::Domain(format!("scales must satisfy y <= 1, got y_max = {}", grid.y_max)));
    }
    let margin = match grid.margin {
        Margin::Auto => (grid.y_max * pair.psi().decay_radius()).max(pair.phi().decay_radius()),
        Margin::Fixed(m) => m,
    };
    let interior = Interior::from_margin(f.len(), f.dt(), margin)?;
    let w = cwt_forward(f, pair.psi(), &grid.clone().with_margin(Margin::Fixed(margin))?)?;
    let low = lowpass(f, pair.phi())?;

    let (low_sup, low_at) = sup_at(low.samples(), interior.range());
    let (wav_sup, wav_at) = w
        .scales()
        .iter()
        .enumerate()
        .map(|(j, &y)| {
            let (m, i) = sup_at(w.row(j), interior.range());
            (m / (y.powf(alpha) * weight.value(y)), (i, j))
        })
        .fold((0.0, (interior.start, 0)), |best, cur| if cur.0 > best.0 { cur } else { best });

    let mut components = BTreeMap::new();
    components.insert("lowpass_sup".to_string(), low_sup);
    components.insert("wavelet_sup".to_string(), wav_sup);
    let mut argmax = BTreeMap::new();
    argmax.insert("lowpass_sup".to_string(), vec![f.t(low_at)]);
    argmax.insert("wavelet_sup".to_string(), vec![f.t(wav_at.0), w.scales()[wav_at.1]]);
    let mut g = norm_grid(f, interior);
    g.scales = Some(grid.clone().with_margin(Margin::Fixed(margin))?);
    Ok(NormReport { value: low_sup + wav_sup, components, argmax, grid: g })
}

const PAIR_BUDGET: usize = 2_000_000;
const DENSE_LAGS: usize = 64;
const LAG_RATIO: f64 = 1.02;

/// Lags `1..=max_lag`, thinned geometrically beyond [`DENSE_LAGS`] once
/// `positions * max_lag` exceeds the pair budget.
fn lag_set(max_lag: usize, positions: usize) -> (Vec<usize>, LagSampling) {
    let (lags, dense, ratio) = if max_lag.saturating_mul(positions) <= PAIR_BUDGET || max_lag <= DENSE_LAGS {
        ((1..=max_lag).collect::<Vec<_>>(), max_lag, None)
    } else {
        let mut lags: Vec<usize> = (1..=DENSE_LAGS).collect();
        let mut k = DENSE_LAGS;
        while k < max_lag {
            k = ((k as f64 * LAG_RATIO).round() as usize).max(k + 1).min(max_lag);
            lags.push(k);
        }
        (lags, DENSE_LAGS, Some(LAG_RATIO))
    };
    let info = LagSampling { max_lag, dense_up_to: dense, ratio, lags_used: lags.len(), pairs: 0 };
    (lags, info)
}

/// Largest `q(i, k) / denom(k)` over the lags, with `q` evaluated on every
/// admissible position. Returns `(value, i, k, pairs)`.
fn scan_lags<P, Q, D>(lags: &[usize], positions: P, q: Q, denom: D) -> (f64, usize, usize, usize)
where
    P: Fn(usize) -> std::ops::Range<usize> + Sync,
    Q: Fn(usize, usize) -> f64 + Sync,
    D: Fn(usize) -> f64 + Sync,
{
    let per_lag: Vec<(f64, usize, usize)> = lags
        .par_iter()
        .map(|&k| {
            let range = positions(k);
            let n = range.len();
            let start = range.start;
            let (m, at) = range.fold((0.0, start), |(m, at), i| {
                let v = q(i, k);
                if v > m {
                    (v, i)
                } else {
                    (m, at)
                }
            });
            (m / denom(k), at, n)
        })
        .collect();
    let pairs = per_lag.iter().map(|p| p.2).sum();
    let mut best = (0.0, 0, 0);
    for (&k, &(v, at, _)) in lags.iter().zip(&per_lag) {
        if v > best.0 {
            best = (v, at, k);
        }
    }
    (best.0, best.1, best.2, pairs)
}

fn interior_of(f: &SampledSignal, margin: f64) -> Result<Interior> {
    if !(margin.is_finite() && margin >= 0.0) {
        return Err(Error::Parameter(format!("margin must be >= 0, got {margin}")));
    }
    Interior::from_margin(f.len(), f.dt(), margin)
}

fn max_lag(dt: f64) -> usize {
    (1.0 / dt + 1e-9).floor() as usize
}

/// Adds `sup |d^j f|` for `j = 0..=order` and returns `d^order f`.
fn derivative_sups(
    f: &SampledSignal,
    order: u32,
    interior: Interior,
    components: &mut BTreeMap<String, f64>,
    argmax: &mut BTreeMap<String, Vec<f64>>,
) -> Result<SampledSignal> {
    let mut top = f.clone();
    for j in 0..=order {
        let d = if j == 0 { f.clone() } else { derivative(f, j)? };
        let (m, at) = sup_at(d.samples(), interior.range());
        components.insert(format!("sup_d{j}"), m);
        argmax.insert(format!("sup_d{j}"), vec![f.t(at)]);
        top = d;
    }
    Ok(top)
}

/// Weighted Hölder norm.
///
/// For non-integer `alpha` with `p = floor(alpha)`: the sups of `d^j f`,
/// `j <= p`, plus `sup |d^p f(t) - d^p f(x)| / (|t - x|^{alpha - p} L(|t - x|))`
/// over `0 < |t - x| <= 1`. For integer `alpha = p + 1` the quotient uses
/// `d^p f` with exponent 1. Both points range over the interior left by
/// `margin`.
pub fn holder_norm(
    f: &SampledSignal,
    weight: &SlowlyVaryingWeight,
    alpha: f64,
    margin: f64,
) -> Result<NormReport> {
    weight.validate()?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("Hölder norms need alpha > 0, got {alpha}")));
    }
    let interior = interior_of(f, margin)?;
    let (order, gamma) = if alpha.fract() == 0.0 {
        (alpha as u32 - 1, 1.0)
    } else {
        (alpha.floor() as u32, alpha.fract())
    };
    let mut components = BTreeMap::new();
    let mut argmax = BTreeMap::new();
    let g = derivative_sups(f, order, interior, &mut components, &mut argmax)?;

    let dt = f.dt();
    let (lags, mut info) = lag_set(max_lag(dt).min(interior.len().saturating_sub(1)), interior.len());
    let v = g.samples();
    let (diff, at, k, pairs) = scan_lags(
        &lags,
        |k| interior.start..interior.end.saturating_sub(k),
        |i, k| (v[i + k] - v[i]).abs(),
        |k| {
            let h = k as f64 * dt;
            h.powf(gamma) * weight.value(h.min(1.0))
        },
    );
    info.pairs = pairs;
    components.insert("difference_sup".to_string(), diff);
    argmax.insert("difference_sup".to_string(), vec![f.t(at.min(f.len() - 1)), k as f64 * dt]);
    let value = components.values().sum();
    let mut grid = norm_grid(f, interior);
    grid.lags = Some(info);
    Ok(NormReport { value, components, argmax, grid })
}

/// Second-difference norm for integer smoothness `p + 1`:
/// `sum_{j <= p} sup |d^j f| + sup |g(t + h) + g(t - h) - 2 g(t)| / (h L(h))`
/// with `g = d^p f` and `0 < h <= 1` on the sample lattice.
pub fn second_difference_norm(
    f: &SampledSignal,
    weight: &SlowlyVaryingWeight,
    p: u32,
    margin: f64,
) -> Result<NormReport> {
    weight.validate()?;
    let interior = interior_of(f, margin)?;
    let mut components = BTreeMap::new();
    let mut argmax = BTreeMap::new();
    let g = derivative_sups(f, p, interior, &mut components, &mut argmax)?;

    let dt = f.dt();
    let (lags, mut info) = lag_set(max_lag(dt).min(interior.len().saturating_sub(1) / 2), interior.len());
    let v = g.samples();
    let (diff, at, k, pairs) = scan_lags(
        &lags,
        |k| (interior.start + k)..interior.end.saturating_sub(k).max(interior.start + k),
        |i, k| (v[i + k] + v[i - k] - 2.0 * v[i]).abs(),
        |k| {
            let h = k as f64 * dt;
            h * weight.value(h.min(1.0))
        },
    );
    info.pairs = pairs;
    components.insert("second_difference_sup".to_string(), diff);
    argmax.insert("second_difference_sup".to_string(), vec![f.t(at.min(f.len() - 1)), k as f64 * dt]);
    let value = components.values().sum();
    let mut grid = norm_grid(f, interior);
    grid.lags = Some(info);
    Ok(NormReport { value, components, argmax, grid })
}

/// `max_t (1 + t^2)^{k/2} |d^m f(t)|` over all samples.
pub fn schwartz_seminorm(f: &SampledSignal, k: u32, m: u32) -> Result<f64> {
    let d = derivative(f, m)?;
    Ok(d
        .samples()
        .iter()
        .enumerate()
        .map(|(i, v)| (1.0 + f.t(i).powi(2)).powf(0.5 * k as f64) * v.abs())
        .fold(0.0, f64::max))
}

/// `(1/y) d/d(ln y)` applied row-wise; central differences inside the
/// grid, one-sided at its ends.
fn scale_derivative(rows: &[Vec<f64>], scales: &[f64]) -> Vec<Vec<f64>> {
    let n = rows.len();
    let u: Vec<f64> = scales.iter().map(|y| y.ln()).collect();
    (0..n)
        .map(|j| {
            let (a, b) = if n == 1 {
                (j, j)
            } else if j == 0 {
                (0, 1)
            } else if j == n - 1 {
                (n - 2, n - 1)
            } else {
                (j - 1, j + 1)
            };
            if a == b {
                return vec![0.0; rows[j].len()];
            }
            let s = 1.0 / ((u[b] - u[a]) * scales[j]);
            rows[b].iter().zip(&rows[a]).map(|(p, q)| (p - q) * s).collect()
        })
        .collect()
}

/// `max (y^l + y^{-l}) (1 + x^2)^{k/2} |d_y^nu d_x^m Phi(x, y)|` over the
/// interior of the scalogram.
///
/// `d_x` is spectral along each row; `d_y` is a finite difference in `ln y`.
pub fn halfspace_seminorm(phi: &Scalogram, l: u32, k: u32, nu: u32, m: u32) -> Result<f64> {
    let dt = phi.dt();
    let mut rows: Vec<Vec<f64>> = (0..phi.ny())
        .into_par_iter()
        .map(|j| {
            let row = phi.row(j);
            if m == 0 {
                row.to_vec()
            } else {
                let nyquist = std::f64::consts::PI / dt;
                apply_multiplier(row, dt, |x| {
                    if m % 2 == 1 && (x - nyquist).abs() <= 1e-9 * nyquist {
                        num_complex::Complex64::new(0.0, 0.0)
                    } else {
                        num_complex::Complex64::new(0.0, x).powu(m)
                    }
                })
            }
        })
        .collect();
    for _ in 0..nu {
        rows = scale_derivative(&rows, phi.scales());
    }
    let interior = phi.interior();
    let mut best = 0.0f64;
    for (row, &y) in rows.iter().zip(phi.scales()) {
        let wy = y.powi(l as i32) + y.powi(-(l as i32));
        for i in interior.range() {
            let x = phi.x(i);
            best = best.max(wy * (1.0 + x * x).powf(0.5 * k as f64) * row[i].abs());
        }
    }
    if !best.is_finite() {
        return Err(Error::Numeric("half-space seminorm overflowed".into()));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{make_band_bump, make_meyer_lp_pair};

    fn flat() -> SlowlyVaryingWeight {
        SlowlyVaryingWeight::constant()
    }

    #[test]
    fn zero_signal_has_zero_norms() {
        let f = SampledSignal::on_window(-16.0, 16.0, 4096, |_| 0.0).unwrap();
        let pair = make_meyer_lp_pair(0.5, 1.0).unwrap();
        let grid = ScaleGrid::new(1.0 / 16.0, 1.0, 8).unwrap().with_margin(Margin::Fixed(4.0)).unwrap();
        assert_eq!(zygmund_norm(&f, &pair, &flat(), 0.5, &grid).unwrap().value, 0.0);
        assert_eq!(holder_norm(&f, &flat(), 0.5, 2.0).unwrap().value, 0.0);
        assert_eq!(second_difference_norm(&f, &flat(), 0, 2.0).unwrap().value, 0.0);
        assert_eq!(schwartz_seminorm(&f, 3, 2).unwrap(), 0.0);
    }

    #[test]
    fn constant_signal_zygmund_norm_is_one() {
        let f = SampledSignal::on_window(-400.0, 400.0, 1 << 15, |_| 1.0).unwrap();
        let pair = make_meyer_lp_pair(0.5, 1.0).unwrap();
        let grid = ScaleGrid::new(1.0 / 8.0, 1.0, 8).unwrap();
        let r = zygmund_norm(&f, &pair, &flat(), 0.7, &grid).unwrap();
        assert!((r.components["lowpass_sup"] - 1.0).abs() < 1e-5, "{r:?}");
        assert!(r.components["wavelet_sup"] < 1e-4, "{r:?}");
        assert!((r.value - 1.0).abs() < 2e-4);
    }

    #[test]
    fn invalid_pair_is_a_configuration_error() {
        let f = SampledSignal::on_window(-16.0, 16.0, 4096, |t| (-t * t).exp()).unwrap();
        let gd = crate::kernels::SpectralWavelet::gaussian_derivative(1).unwrap();
        let phi = crate::kernels::LowPass::meyer(0.5, 1.0).unwrap();
        let pair = LPPair::new(phi, gd.clone(), gd, 0.75, 0.0).unwrap();
        let grid = ScaleGrid::new(1.0 / 16.0, 1.0, 8).unwrap();
        let r = zygmund_norm(&f, &pair, &flat(), 2.0, &grid);
        assert!(matches!(r, Err(Error::Configuration(_))), "{r:?}");
    }

    #[test]
    fn holder_of_identity_at_half() {
        let f = SampledSignal::on_window(-4.0, 4.0, 1024, |t| t).unwrap();
        let r = holder_norm(&f, &flat(), 0.5, 1.0).unwrap();
        assert!((r.components["difference_sup"] - 1.0).abs() < 1e-12, "{r:?}");
        assert!((r.argmax["difference_sup"][1] - 1.0).abs() < 1e-12);
        assert!(r.grid.lags.as_ref().unwrap().ratio.is_none());
    }

    #[test]
    fn holder_rejects_nonpositive_alpha() {
        let f = SampledSignal::on_window(-4.0, 4.0, 64, |t| t).unwrap();
        assert!(matches!(holder_norm(&f, &flat(), 0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(holder_norm(&f, &flat(), -1.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn second_differences_of_polynomials() {
        let affine = SampledSignal::on_window(-4.0, 4.0, 1024, |t| 3.0 * t - 1.0).unwrap();
        let r = second_difference_norm(&affine, &flat(), 0, 1.0).unwrap();
        assert!(r.components["second_difference_sup"] < 1e-12);
        let sq = SampledSignal::on_window(-4.0, 4.0, 1024, |t| t * t).unwrap();
        let r = second_difference_norm(&sq, &flat(), 0, 1.0).unwrap();
        assert!((r.components["second_difference_sup"] - 2.0).abs() < 1e-10, "{r:?}");
        let kink = SampledSignal::on_window(-4.0, 4.0, 1024, |t| (t - 0.5).abs()).unwrap();
        let r = second_difference_norm(&kink, &flat(), 0, 1.0).unwrap();
        assert!((r.components["second_difference_sup"] - 2.0).abs() < 1e-10, "{r:?}");
        assert!((r.argmax["second_difference_sup"][0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn lags_thin_out_past_the_budget() {
        let (lags, info) = lag_set(1 << 14, 1 << 16);
        assert_eq!(&lags[..64], &(1..=64).collect::<Vec<_>>()[..]);
        assert_eq!(*lags.last().unwrap(), 1 << 14);
        assert!(lags.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(info.ratio, Some(LAG_RATIO));
        assert!(lags.len() < 400);
    }

    #[test]
    fn schwartz_seminorm_of_gaussian() {
        let f = SampledSignal::on_window(-20.0, 20.0, 1 << 14, |t| (-0.5 * t * t).exp()).unwrap();
        assert!((schwartz_seminorm(&f, 0, 0).unwrap() - 1.0).abs() < 1e-12);
        // (1 + t^2) e^{-t^2/2} peaks at t = 1 with value 2 e^{-1/2}.
        let v = schwartz_seminorm(&f, 2, 0).unwrap();
        assert!((v - 2.0 * (-0.5f64).exp()).abs() < 1e-6, "{v}");
    }

    #[test]
    fn halfspace_seminorm_is_homogeneous() {
        let f = SampledSignal::on_window(-64.0, 64.0, 8192, |t| {
            crate::smooth::bump(t / 8.0) * (3.0 * t).cos()
        })
        .unwrap();
        let psi = make_band_bump(2.0, 8.0).unwrap();
        let grid = ScaleGrid::new(1.0 / 8.0, 1.0, 8).unwrap();
        let w = cwt_forward(&f, &psi, &grid).unwrap();
        let a = halfspace_seminorm(&w, 3, 2, 1, 1).unwrap();
        let b = halfspace_seminorm(&w.scale(2.0), 3, 2, 1, 1).unwrap();
        assert!(a.is_finite() && a > 0.0);
        assert_eq!(b, 2.0 * a);
        assert_eq!(halfspace_seminorm(&w.scale(0.0), 3, 2, 1, 1).unwrap(), 0.0);
    }
}
