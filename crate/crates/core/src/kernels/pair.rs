//! Littlewood-Paley pairs and the admissibility constant.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lowpass::LowPass;
use super::wavelet::{moment, Moments, SpectralWavelet};
use crate::error::{Error, Result};

const ADMISSIBILITY_RTOL: f64 = 1e-8;
const ANISOTROPY_RTOL: f64 = 1e-6;
const ZERO_RTOL: f64 = 1e-12;

/// Serializable description of a built-in pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PairSpec {
    Meyer { xi_pass: f64, xi_stop: f64 },
}

/// Low-pass `phi`, analysing wavelet `psi` and reconstruction wavelet `eta`.
#[derive(Clone, Debug)]
pub struct LPPair {
    phi: LowPass,
    psi: SpectralWavelet,
    eta: SpectralWavelet,
    tau: f64,
    sigma: f64,
    r: f64,
    c: f64,
    order: f64,
}

impl LPPair {
    /// Assembles a pair, computing `c` and checking `tau < sigma < r`, where
    /// `r = phi.xi_stop()` bounds the region where `phi_hat` may be divided by.
    pub fn new(
        phi: LowPass,
        psi: SpectralWavelet,
        eta: SpectralWavelet,
        sigma: f64,
        order: f64,
    ) -> Result<Self> {
        let tau = psi.tau();
        let r = phi.xi_stop();
        if !(tau < sigma && sigma < r) {
            return Err(Error::Parameter(format!(
                "need tau < sigma < r, got tau = {tau}, sigma = {sigma}, r = {r}"
            )));
        }
        if order.is_nan() {
            return Err(Error::Parameter("order must not be NaN".into()));
        }
        let c = admissibility_constant(&psi, &eta)?;
        Ok(LPPair { phi, psi, eta, tau, sigma, r, c, order })
    }

    pub fn from_spec(spec: &PairSpec) -> Result<Self> {
        match *spec {
            PairSpec::Meyer { xi_pass, xi_stop } => make_meyer_lp_pair(xi_pass, xi_stop),
        }
    }

    /// The same pair with another reconstruction wavelet.
    pub fn with_eta(&self, eta: SpectralWavelet) -> Result<Self> {
        LPPair::new(self.phi.clone(), self.psi.clone(), eta, self.sigma, self.order)
    }

    /// The same pair with another `sigma`.
    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        LPPair::new(self.phi.clone(), self.psi.clone(), self.eta.clone(), sigma, self.order)
    }

    pub fn phi(&self) -> &LowPass {
        &self.phi
    }
    pub fn psi(&self) -> &SpectralWavelet {
        &self.psi
    }
    pub fn eta(&self) -> &SpectralWavelet {
        &self.eta
    }
    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn id(&self) -> String {
        format!("lp_pair[{}, {}, eta = {}]", self.phi.id(), self.psi.id(), self.eta.id())
    }
}

/// The Meyer-type pair for the band `(xi_pass, xi_stop)`: smooth low-pass
/// `phi`, `psi_hat = -xi phi_hat'`, `eta = psi`, `sigma` at the band centre.
pub fn make_meyer_lp_pair(xi_pass: f64, xi_stop: f64) -> Result<LPPair> {
    let phi = LowPass::meyer(xi_pass, xi_stop)?;
    let psi = SpectralWavelet::meyer(xi_pass, xi_stop)?;
    LPPair::new(phi, psi.clone(), psi, 0.5 * (xi_pass + xi_stop), f64::INFINITY)
}

/// Trapezoid rule on `[a, b]` with doubling until the relative change drops
/// below `rtol`. Returns the integral of `f` and of `|f|`.
fn adaptive_trapezoid<F>(f: F, a: f64, b: f64, rtol: f64) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Complex64,
{
    let mut n = 64usize;
    let h0 = (b - a) / n as f64;
    let mut sum = (f(a) + f(b)) * 0.5;
    let mut abs_sum = 0.5 * (f(a).norm() + f(b).norm());
    for k in 1..n {
        let v = f(a + k as f64 * h0);
        sum += v;
        abs_sum += v.norm();
    }
    let mut prev = sum * h0;
    loop {
        let h = (b - a) / (2 * n) as f64;
        for k in 0..n {
            let v = f(a + (2 * k + 1) as f64 * h);
            sum += v;
            abs_sum += v.norm();
        }
        n *= 2;
        let cur = sum * h;
        let scale = abs_sum * h;
        if n >= 256 && (cur - prev).norm() <= rtol * cur.norm().max(1e-300) {
            return Ok((cur, scale));
        }
        if n >= 256 && scale == 0.0 {
            return Ok((cur, scale));
        }
        if n > 1 << 24 {
            return Err(Error::Numeric(format!(
                "log-trapezoid quadrature did not reach relative change {rtol}"
            )));
        }
        prev = cur;
    }
}

/// `c = int_0^inf conj(psi_hat(rho w)) eta_hat(rho w) d rho / rho`, for
/// `w = +1` and `w = -1`; both must agree and be real.
pub fn admissibility_constant(psi: &SpectralWavelet, eta: &SpectralWavelet) -> Result<f64> {
    let lo = psi.support_lo().max(eta.support_lo());
    let hi = psi.support_hi().min(eta.support_hi());
    if lo >= hi {
        return Err(Error::ZeroAdmissibility { value: 0.0, scale: 0.0 });
    }
    let a = if lo > 0.0 { lo / 8.0 } else { 1e-6 };
    let b = if hi.is_finite() { 8.0 * hi } else { 1e3 };
    let (ua, ub) = (a.ln(), b.ln());
    let mut values = [Complex64::new(0.0, 0.0); 2];
    let mut scale: f64 = 0.0;
    for (slot, dir) in values.iter_mut().zip([1.0, -1.0]) {
        let (v, s) = adaptive_trapezoid(
            |u| {
                let rho = dir * u.exp();
                psi.fhat(rho).conj() * eta.fhat(rho)
            },
            ua,
            ub,
            ADMISSIBILITY_RTOL,
        )?;
        *slot = v;
        scale = scale.max(s);
    }
    let [plus, minus] = values;
    let c = (plus + minus) * 0.5;
    let zero = ZERO_RTOL * scale;
    if plus.norm() <= zero && minus.norm() <= zero {
        return Err(Error::ZeroAdmissibility { value: c.norm(), scale });
    }
    if (plus - minus).norm() > ANISOTROPY_RTOL * plus.norm().max(minus.norm()) {
        return Err(Error::Anisotropy { plus: plus.re, minus: minus.re });
    }
    if c.im.abs() >= 1e-6 * c.norm() {
        return Err(Error::ComplexAdmissibility { re: c.re, im: c.im });
    }
    Ok(c.re)
}

/// One entry of a [`ValidationReport`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationCheck {
    pub name: String,
    pub passed: bool,
    pub measured: Option<f64>,
    pub detail: String,
}

/// Outcome of [`validate_lp_pair`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub alpha: f64,
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&ValidationCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub(crate) fn failures(&self) -> String {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

const LOWPASS_GRID: usize = 1024;
const MAX_NUMERIC_MOMENT: u32 = 12;

fn check_lowpass(pair: &LPPair) -> ValidationCheck {
    let name = "lowpass_nonvanishing".to_string();
    let tau = pair.tau;
    if !tau.is_finite() {
        return ValidationCheck {
            name,
            passed: false,
            measured: None,
            detail: "psi is degenerate (tau = inf)".into(),
        };
    }
    let vals: Vec<f64> = (0..LOWPASS_GRID)
        .map(|k| pair.phi.fhat(-tau + 2.0 * tau * k as f64 / (LOWPASS_GRID - 1) as f64))
        .collect();
    let min = vals.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    let max = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let sign_change = vals.windows(2).any(|w| w[0] * w[1] < 0.0);
    let passed = !sign_change && min > 1e-9 * max;
    let detail = if sign_change {
        "phi_hat changes sign on [-tau, tau]".to_string()
    } else {
        format!("min |phi_hat| on [-tau, tau] = {min:e}")
    };
    ValidationCheck { name, passed, measured: Some(min), detail }
}

fn check_moments(pair: &LPPair, alpha: f64) -> ValidationCheck {
    let name = "vanishing_moments".to_string();
    let psi = &pair.psi;
    let top = if alpha < 0.0 {
        0
    } else if alpha.is_infinite() {
        if psi.vanishing_moments() != Moments::Infinite {
            return ValidationCheck {
                name,
                passed: false,
                measured: None,
                detail: format!(
                    "order inf needs all moments to vanish, psi has {:?}",
                    psi.vanishing_moments()
                ),
            };
        }
        MAX_NUMERIC_MOMENT
    } else {
        (alpha.floor() as u32).min(MAX_NUMERIC_MOMENT)
    };
    let tol = 1e-8 * psi.peak().max(1.0);
    let mut worst: f64 = 0.0;
    for m in 0..=top {
        match moment(psi, m) {
            Ok(mu) => {
                worst = worst.max(mu.abs());
                if mu.abs() > tol {
                    return ValidationCheck {
                        name,
                        passed: false,
                        measured: Some(mu.abs()),
                        detail: format!("mu_{m} = {mu} is not zero"),
                    };
                }
            }
            Err(e) => {
                return ValidationCheck {
                    name,
                    passed: false,
                    measured: None,
                    detail: format!("mu_{m}: {e}"),
                }
            }
        }
    }
    ValidationCheck {
        name,
        passed: true,
        measured: Some(worst),
        detail: format!("max |mu_m| for m <= {top} is {worst:e}"),
    }
}

fn check_admissibility(pair: &LPPair) -> ValidationCheck {
    let name = "admissibility".to_string();
    match admissibility_constant(&pair.psi, &pair.eta) {
        Ok(c) => ValidationCheck {
            name,
            passed: c != 0.0,
            measured: Some(c),
            detail: format!("c = {c}"),
        },
        Err(e) => ValidationCheck { name, passed: false, measured: None, detail: e.to_string() },
    }
}

/// Checks the defining conditions of an LP-pair of order `alpha`.
pub fn validate_lp_pair(pair: &LPPair, alpha: f64) -> ValidationReport {
    ValidationReport {
        alpha,
        checks: vec![check_lowpass(pair), check_moments(pair, alpha), check_admissibility(pair)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::make_band_bump;

    #[test]
    fn meyer_pair_fields() {
        let pair = make_meyer_lp_pair(0.5, 1.0).unwrap();
        assert_eq!(pair.tau(), 0.5);
        assert_eq!(pair.r(), 1.0);
        assert!(pair.tau() < pair.sigma() && pair.sigma() < pair.r());
        assert_eq!(pair.order(), f64::INFINITY);
        assert_eq!(pair.psi().fhat(0.0).norm(), 0.0);
        assert_eq!(pair.phi().fhat(0.0), 1.0);
        assert!(pair.c() > 0.0);
    }

    #[test]
    fn meyer_pair_rejects_bad_band() {
        assert!(matches!(make_meyer_lp_pair(1.0, 0.5), Err(Error::Parameter(_))));
    }

    #[test]
    fn meyer_constant_matches_reference_value() {
        // Independent plain-rho quadrature of int psi_hat^2 / rho.
        let pair = make_meyer_lp_pair(0.5, 1.0).unwrap();
        assert!((pair.c() - 2.457_405_872_0).abs() < 1e-8, "{}", pair.c());
    }

    #[test]
    fn disjoint_supports_are_not_admissible() {
        let a = make_band_bump(1.0, 2.0).unwrap();
        let b = make_band_bump(3.0, 4.0).unwrap();
        assert!(matches!(
            admissibility_constant(&a, &b),
            Err(Error::ZeroAdmissibility { .. })
        ));
    }

    #[test]
    fn one_sided_wavelet_is_anisotropic() {
        let a = SpectralWavelet::one_sided_bump(1.0, 2.0).unwrap();
        assert!(matches!(admissibility_constant(&a, &a), Err(Error::Anisotropy { .. })));
    }

    #[test]
    fn admissibility_is_linear_in_eta() {
        let psi = SpectralWavelet::meyer(0.5, 1.0).unwrap();
        let eta = make_band_bump(0.6, 0.9).unwrap();
        let c1 = admissibility_constant(&psi, &eta).unwrap();
        let c2 = admissibility_constant(&psi, &eta.scaled(2.0).unwrap()).unwrap();
        assert!((c2 - 2.0 * c1).abs() <= 1e-14 * c1.abs());
    }

    #[test]
    fn validation_of_meyer_pair_passes_at_high_order() {
        let pair = make_meyer_lp_pair(0.5, 1.0).unwrap();
        let report = validate_lp_pair(&pair, 10.0);
        assert!(report.passed(), "{:?}", report);
        assert_eq!(report.checks.len(), 3);
    }

    #[test]
    fn lowpass_with_interior_zero_fails_check_a() {
        let phi = LowPass::custom(
            "zero_at_0.3",
            |u| {
                let base = crate::smooth::theta((1.0 - u.abs()) / 0.5);
                base * (0.3 - u.abs()) / 0.3
            },
            0.5,
            1.0,
        )
        .unwrap();
        let psi = SpectralWavelet::meyer(0.5, 1.0).unwrap();
        let pair = LPPair::new(phi, psi.clone(), psi, 0.75, f64::INFINITY).unwrap();
        let report = validate_lp_pair(&pair, 1.0);
        assert!(!report.check("lowpass_nonvanishing").unwrap().passed);
        assert!(report.check("vanishing_moments").unwrap().passed);
    }

    #[test]
    fn first_gaussian_derivative_fails_moment_check_at_order_one_and_a_half() {
        let phi = LowPass::meyer(0.5, 1.0).unwrap();
        let psi = SpectralWavelet::gaussian_derivative(1).unwrap();
        // tau = 0 for this wavelet; sigma may sit anywhere below r.
        let pair = LPPair::new(phi, psi.clone(), psi, 0.5, 1.5).unwrap();
        let report = validate_lp_pair(&pair, 1.5);
        let check = report.check("vanishing_moments").unwrap();
        assert!(!check.passed);
        let mu1 = check.measured.unwrap();
        assert!((mu1 - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-8);
        // Negative order only asks for mu_0.
        assert!(validate_lp_pair(&pair, -0.5).check("vanishing_moments").unwrap().passed);
    }
}
