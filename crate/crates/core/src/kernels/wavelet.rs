//! Wavelets defined by a closed-form Fourier transform.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::profile::profile;
use crate::error::{Error, Result};
use crate::smooth::{ln_theta, ln_theta_prime, theta, theta_prime};

/// Relative amplitude below which a kernel tail counts as decayed.
pub const DEFAULT_DECAY_TOL: f64 = 1e-6;

/// Threshold used by [`nondegeneracy_index`] when none is supplied.
pub const DEFAULT_NONDEGENERACY_TOL: f64 = 1e-9;

const SCAN_POINTS: usize = 1 << 16;

/// Number of vanishing moments: the largest `M` with `mu_m = 0` for `m <= M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Moments {
    Finite(u32),
    Infinite,
}

impl Moments {
    /// True when every moment of order `<= m` vanishes.
    pub fn covers(self, m: u32) -> bool {
        match self {
            Moments::Infinite => true,
            Moments::Finite(k) => m <= k,
        }
    }
}

/// Serializable description of the built-in wavelet families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WaveletSpec {
    /// `-xi * phi_hat'(xi)` for the smooth low-pass with the given band.
    Meyer { xi_pass: f64, xi_stop: f64 },
    /// Even bump supported in `lo <= |xi| <= hi`, equal to 1 on the middle third.
    BandBump { lo: f64, hi: f64 },
    /// `(-d/dt)^order exp(-t^2/2)`.
    GaussianDerivative { order: u32 },
    /// Band bump restricted to positive frequencies (degenerate, complex).
    OneSidedBump { lo: f64, hi: f64 },
}

impl WaveletSpec {
    fn validate(&self) -> Result<()> {
        let band = |lo: f64, hi: f64| {
            if lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi {
                Ok(())
            } else {
                Err(Error::Parameter(format!(
                    "band requires 0 < lo < hi, got ({lo}, {hi})"
                )))
            }
        };
        match *self {
            WaveletSpec::Meyer { xi_pass, xi_stop } => band(xi_pass, xi_stop),
            WaveletSpec::BandBump { lo, hi } | WaveletSpec::OneSidedBump { lo, hi } => band(lo, hi),
            WaveletSpec::GaussianDerivative { order } => {
                if order == 0 {
                    Err(Error::Parameter(
                        "a Gaussian has nonzero mean; order must be >= 1".into(),
                    ))
                } else {
                    Ok(())
                }
            }
        }
    }

    fn eval(&self, xi: f64) -> Complex64 {
        match *self {
            WaveletSpec::Meyer { xi_pass, xi_stop } => {
                let w = xi_stop - xi_pass;
                let a = xi.abs();
                Complex64::new(a * theta_prime((xi_stop - a) / w) / w, 0.0)
            }
            WaveletSpec::BandBump { lo, hi } => Complex64::new(band_bump(xi.abs(), lo, hi), 0.0),
            WaveletSpec::OneSidedBump { lo, hi } => {
                if xi > 0.0 {
                    Complex64::new(band_bump(xi, lo, hi), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            WaveletSpec::GaussianDerivative { order } => {
                let g = (2.0 * PI).sqrt() * (-0.5 * xi * xi).exp();
                Complex64::new(0.0, -xi).powu(order) * g
            }
        }
    }

    /// `ln |psi_hat(xi)|`, evaluated without underflow near support edges.
    fn ln_abs(&self, xi: f64) -> f64 {
        match *self {
            WaveletSpec::Meyer { xi_pass, xi_stop } => {
                let w = xi_stop - xi_pass;
                let a = xi.abs();
                a.ln() + ln_theta_prime((xi_stop - a) / w) - w.ln()
            }
            WaveletSpec::BandBump { lo, hi } => ln_band_bump(xi.abs(), lo, hi),
            WaveletSpec::OneSidedBump { lo, hi } => {
                if xi > 0.0 {
                    ln_band_bump(xi, lo, hi)
                } else {
                    f64::NEG_INFINITY
                }
            }
            WaveletSpec::GaussianDerivative { order } => {
                order as f64 * xi.abs().ln() - 0.5 * xi * xi + 0.5 * (2.0 * PI).ln()
            }
        }
    }

    fn support(&self) -> (f64, f64) {
        match *self {
            WaveletSpec::Meyer { xi_pass, xi_stop } => (xi_pass, xi_stop),
            WaveletSpec::BandBump { lo, hi } | WaveletSpec::OneSidedBump { lo, hi } => (lo, hi),
            WaveletSpec::GaussianDerivative { .. } => (0.0, f64::INFINITY),
        }
    }

    fn extent(&self) -> f64 {
        match *self {
            WaveletSpec::GaussianDerivative { order } => {
                // |xi|^n exp(-xi^2/2) below 1e-18 of its peak.
                let n = order as f64;
                (2.0 * (42.0 + n * (1.0 + (1.0 + n).ln()))).sqrt() + n.sqrt()
            }
            _ => self.support().1,
        }
    }

    fn moments(&self) -> Moments {
        match *self {
            WaveletSpec::GaussianDerivative { order } => Moments::Finite(order - 1),
            _ => Moments::Infinite,
        }
    }

    fn tau(&self) -> f64 {
        match *self {
            WaveletSpec::OneSidedBump { .. } => f64::INFINITY,
            _ => self.support().0,
        }
    }
}

fn band_bump(a: f64, lo: f64, hi: f64) -> f64 {
    let w = (hi - lo) / 3.0;
    theta((a - lo) / w) * theta((hi - a) / w)
}

fn ln_band_bump(a: f64, lo: f64, hi: f64) -> f64 {
    let w = (hi - lo) / 3.0;
    ln_theta((a - lo) / w) + ln_theta((hi - a) / w)
}

type SpectrumFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum Shape {
    Builtin(WaveletSpec),
    Custom { name: String, f: SpectrumFn, extent: f64 },
}

struct Inner {
    shape: Shape,
    dilation: f64,
    gain: f64,
    conjugated: bool,
    support_lo: f64,
    support_hi: f64,
    vanishing_moments: Moments,
    tau: f64,
    decay: OnceLock<f64>,
    peak: OnceLock<f64>,
}

/// A wavelet `psi` given by its Fourier transform `psi_hat`.
///
/// Cheap to clone; all clones share one immutable description.
#[derive(Clone)]
pub struct SpectralWavelet {
    inner: Arc<Inner>,
}

impl fmt::Debug for SpectralWavelet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralWavelet")
            .field("id", &self.id())
            .field("support_lo", &self.inner.support_lo)
            .field("support_hi", &self.inner.support_hi)
            .field("vanishing_moments", &self.inner.vanishing_moments)
            .field("tau", &self.inner.tau)
            .finish()
    }
}

impl SpectralWavelet {
    fn build(shape: Shape, support: (f64, f64), moments: Moments, tau: f64) -> Self {
        SpectralWavelet {
            inner: Arc::new(Inner {
                shape,
                dilation: 1.0,
                gain: 1.0,
                conjugated: false,
                support_lo: support.0,
                support_hi: support.1,
                vanishing_moments: moments,
                tau,
                decay: OnceLock::new(),
                peak: OnceLock::new(),
            }),
        }
    }

    /// Builds a wavelet from its serializable description.
    pub fn from_spec(spec: &WaveletSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self::build(
            Shape::Builtin(spec.clone()),
            spec.support(),
            spec.moments(),
            spec.tau(),
        ))
    }

    /// Meyer-type wavelet `-xi * phi_hat'(xi)` for the band `(xi_pass, xi_stop)`.
    pub fn meyer(xi_pass: f64, xi_stop: f64) -> Result<Self> {
        Self::from_spec(&WaveletSpec::Meyer { xi_pass, xi_stop })
    }

    /// `(-d/dt)^order` of the standard Gaussian.
    pub fn gaussian_derivative(order: u32) -> Result<Self> {
        Self::from_spec(&WaveletSpec::GaussianDerivative { order })
    }

    /// Band bump restricted to `xi > 0`.
    pub fn one_sided_bump(lo: f64, hi: f64) -> Result<Self> {
        Self::from_spec(&WaveletSpec::OneSidedBump { lo, hi })
    }

    /// Wavelet from an arbitrary closure. `extent` bounds the frequencies
    /// where `f` is numerically nonzero; `tau` is obtained by scanning.
    pub fn custom<F>(
        name: &str,
        f: F,
        support: (f64, f64),
        extent: f64,
        vanishing_moments: Moments,
    ) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::Parameter(format!("extent must be positive, got {extent}")));
        }
        if !(support.0 >= 0.0 && support.0 < support.1) {
            return Err(Error::Parameter(format!("invalid support {support:?}")));
        }
        let w = Self::build(
            Shape::Custom { name: name.to_string(), f: Arc::new(f), extent },
            support,
            vanishing_moments,
            0.0,
        );
        let tau = nondegeneracy_index(&w, DEFAULT_NONDEGENERACY_TOL);
        let mut inner = Arc::try_unwrap(w.inner).unwrap_or_else(|_| unreachable!());
        inner.tau = tau;
        Ok(SpectralWavelet { inner: Arc::new(inner) })
    }

    fn derived(&self, dilation: f64, gain: f64, conjugated: bool) -> Self {
        let i = &self.inner;
        SpectralWavelet {
            inner: Arc::new(Inner {
                shape: i.shape.clone(),
                dilation: i.dilation * dilation,
                gain: i.gain * gain,
                conjugated: i.conjugated ^ conjugated,
                support_lo: i.support_lo * dilation,
                support_hi: i.support_hi * dilation,
                vanishing_moments: i.vanishing_moments,
                tau: i.tau * dilation,
                decay: OnceLock::new(),
                peak: OnceLock::new(),
            }),
        }
    }

    /// The wavelet with transform `psi_hat(xi / lambda)`.
    pub fn dilated(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Parameter(format!("dilation must be positive, got {lambda}")));
        }
        Ok(self.derived(lambda, 1.0, false))
    }

    /// The wavelet `gain * psi`.
    pub fn scaled(&self, gain: f64) -> Result<Self> {
        if !(gain.is_finite() && gain != 0.0) {
            return Err(Error::Parameter(format!("gain must be finite and nonzero, got {gain}")));
        }
        Ok(self.derived(1.0, gain, false))
    }

    /// The complex conjugate wavelet, with transform `conj(psi_hat(-xi))`.
    pub fn conjugate(&self) -> Self {
        self.derived(1.0, 1.0, true)
    }

    /// Evaluates `psi_hat(xi)`.
    #[inline]
    pub fn fhat(&self, xi: f64) -> Complex64 {
        let i = &self.inner;
        let arg = if i.conjugated { -xi } else { xi } / i.dilation;
        let v = match &i.shape {
            Shape::Builtin(s) => s.eval(arg),
            Shape::Custom { f, .. } => f(arg),
        };
        let v = if i.conjugated { v.conj() } else { v };
        v * i.gain
    }

    /// `ln |psi_hat(xi)|`. Built-in families evaluate it in closed form so
    /// that the smooth edges of the support stay resolvable.
    pub fn ln_abs_fhat(&self, xi: f64) -> f64 {
        let i = &self.inner;
        let arg = if i.conjugated { -xi } else { xi } / i.dilation;
        let v = match &i.shape {
            Shape::Builtin(s) => s.ln_abs(arg),
            Shape::Custom { f, .. } => f(arg).norm().ln(),
        };
        v + i.gain.abs().ln()
    }

    pub fn support_lo(&self) -> f64 {
        self.inner.support_lo
    }

    pub fn support_hi(&self) -> f64 {
        self.inner.support_hi
    }

    pub fn vanishing_moments(&self) -> Moments {
        self.inner.vanishing_moments
    }

    pub fn tau(&self) -> f64 {
        self.inner.tau
    }

    /// Built-in description, when the wavelet is an undilated, unscaled
    /// member of a built-in family.
    pub fn spec(&self) -> Option<WaveletSpec> {
        let i = &self.inner;
        match &i.shape {
            Shape::Builtin(s) if i.dilation == 1.0 && i.gain == 1.0 && !i.conjugated => {
                Some(s.clone())
            }
            _ => None,
        }
    }

    /// Human-readable identifier used in reports.
    pub fn id(&self) -> String {
        let i = &self.inner;
        let mut s = match &i.shape {
            Shape::Builtin(WaveletSpec::Meyer { xi_pass, xi_stop }) => {
                format!("meyer({xi_pass},{xi_stop})")
            }
            Shape::Builtin(WaveletSpec::BandBump { lo, hi }) => format!("band_bump({lo},{hi})"),
            Shape::Builtin(WaveletSpec::OneSidedBump { lo, hi }) => {
                format!("one_sided_bump({lo},{hi})")
            }
            Shape::Builtin(WaveletSpec::GaussianDerivative { order }) => {
                format!("gaussian_derivative({order})")
            }
            Shape::Custom { name, .. } => name.clone(),
        };
        if i.dilation != 1.0 {
            s = format!("{s}.dilated({})", i.dilation);
        }
        if i.gain != 1.0 {
            s = format!("{}*{s}", i.gain);
        }
        if i.conjugated {
            s = format!("conj({s})");
        }
        s
    }

    /// Frequency radius beyond which `psi_hat` is numerically zero.
    pub fn spectral_extent(&self) -> f64 {
        let i = &self.inner;
        let base = match &i.shape {
            Shape::Builtin(s) => s.extent(),
            Shape::Custom { extent, .. } => *extent,
        };
        base * i.dilation
    }

    /// `sup |psi_hat|` over a dense frequency scan.
    pub fn peak(&self) -> f64 {
        *self.inner.peak.get_or_init(|| {
            let ext = self.spectral_extent();
            let n = SCAN_POINTS;
            (0..=n)
                .map(|k| {
                    let r = ext * k as f64 / n as f64;
                    self.fhat(r).norm().max(self.fhat(-r).norm())
                })
                .fold(0.0, f64::max)
        })
    }

    /// Radius outside which `|psi(t)| <= DEFAULT_DECAY_TOL * max |psi|`.
    ///
    /// Used to size the interior window: a scale-`y` row of a scalogram is
    /// contaminated by the window edges within `y * decay_radius()`.
    pub fn decay_radius(&self) -> f64 {
        *self.inner.decay.get_or_init(|| {
            profile(|x| self.fhat(x), self.spectral_extent()).decay_radius(DEFAULT_DECAY_TOL)
        })
    }
}

/// `psi` for the band `(a, b)`: a smooth even bump in the frequency annulus,
/// equal to one on its middle third.
pub fn make_band_bump(a: f64, b: f64) -> Result<SpectralWavelet> {
    SpectralWavelet::from_spec(&WaveletSpec::BandBump { lo: a, hi: b })
}

fn binomial(m: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

/// Central difference estimate of `g^{(m)}(0)` with step `h`.
fn central_difference(g: &dyn Fn(f64) -> Complex64, m: u32, h: f64) -> Complex64 {
    let half = m as f64 / 2.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=m {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += g((half - k as f64) * h) * (sign * binomial(m, k));
    }
    acc / h.powi(m as i32)
}

/// `i^m * g^{(m)}(0)` by Richardson-extrapolated central differences.
fn spectral_moment(g: &dyn Fn(f64) -> Complex64, m: u32, support_lo: f64) -> Result<Complex64> {
    if m == 0 {
        return Ok(g(0.0));
    }
    let mf = m as f64;
    // Balances truncation against the eps / h^m rounding amplification.
    let mut h = 1e-3f64.max(2.0 * 1e-7f64.powf(1.0 / mf));
    if support_lo > 0.0 {
        // Keep the whole stencil inside the gap where psi_hat vanishes.
        h = h.min(support_lo / (mf + 1.0));
    }
    const LEVELS: usize = 5;
    let mut table: Vec<Vec<Complex64>> = Vec::with_capacity(LEVELS);
    for level in 0..LEVELS {
        let step = h / (1u32 << level) as f64;
        let mut row = vec![central_difference(g, m, step)];
        for j in 1..=level {
            let f = 4f64.powi(j as i32);
            let v = row[j - 1] + (row[j - 1] - table[level - 1][j - 1]) / (f - 1.0);
            row.push(v);
        }
        table.push(row);
    }
    let best = table[LEVELS - 1][LEVELS - 1];
    let prev = table[LEVELS - 2][LEVELS - 2];
    let tol = 1e-6 * best.norm().max(1.0);
    if !best.is_finite() || (best - prev).norm() > tol {
        return Err(Error::Numeric(format!(
            "derivative of order {m} at 0 did not converge ({best} vs {prev})"
        )));
    }
    Ok(Complex64::i().powu(m) * best)
}

/// Something whose moments `int t^m f(t) dt` can be computed.
pub trait HasMoments {
    fn moment(&self, m: u32) -> Result<f64>;
}

impl HasMoments for SpectralWavelet {
    fn moment(&self, m: u32) -> Result<f64> {
        let mu = spectral_moment(&|x| self.fhat(x), m, self.support_lo())?;
        if mu.im.abs() > 1e-8 * mu.norm().max(1.0) {
            return Err(Error::Numeric(format!("moment {m} is not real: {mu}")));
        }
        Ok(mu.re)
    }
}

/// Moment `mu_m = int t^m psi(t) dt`.
pub fn moment<T: HasMoments + ?Sized>(psi: &T, m: u32) -> Result<f64> {
    psi.moment(m)
}

/// Index of non-degenerateness: the largest, over the two directions, of
/// the first radius where `|psi_hat|` exceeds `tol * sup |psi_hat|`.
///
/// Once the threshold is crossed, the scan walks back along the
/// monotonically decaying edge (in `ln |psi_hat|`, which does not underflow
/// for the built-in families) to the last exact zero, so a wavelet with a
/// hard spectral gap reports the gap radius rather than the point where its
/// smooth edge happens to cross `tol`. `+inf` marks a degenerate wavelet.
pub fn nondegeneracy_index(psi: &SpectralWavelet, tol: f64) -> f64 {
    let ext = psi.spectral_extent();
    let n = SCAN_POINTS;
    let step = ext / n as f64;
    let peak = psi.peak();
    if peak == 0.0 {
        return f64::INFINITY;
    }
    let threshold = (tol * peak).ln();
    let mut tau: f64 = 0.0;
    for dir in [1.0, -1.0] {
        let val = |k: usize| psi.ln_abs_fhat(dir * step * k as f64);
        let Some(first) = (0..=n).find(|&k| val(k) > threshold) else {
            return f64::INFINITY;
        };
        let mut k = first;
        while k > 0 {
            let below = val(k - 1);
            if below > f64::NEG_INFINITY && below <= val(k) {
                k -= 1;
            } else {
                break;
            }
        }
        let edge = if k == 0 { 0.0 } else { step * (k - 1) as f64 };
        tau = tau.max(edge);
    }
    tau
}
