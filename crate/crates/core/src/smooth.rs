//! Smooth transition functions built from `h(x) = exp(-1/x)`.
//!
//! `theta(x) = h(x) / (h(x) + h(1 - x))` rises from 0 at `x <= 0` to 1 at
//! `x >= 1` and is C-infinity. Writing `q = 1/(1-x) - 1/x` turns it into the
//! logistic function of `q`, which is how it is evaluated here: no overflow,
//! no catastrophic cancellation near the endpoints.

fn logistic_slope(q: f64) -> f64 {
    let e = (-q.abs()).exp();
    e / ((1.0 + e) * (1.0 + e))
}

/// The glue function `theta`.
pub fn theta(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let q = 1.0 / (1.0 - x) - 1.0 / x;
        if q >= 0.0 {
            1.0 / (1.0 + (-q).exp())
        } else {
            let e = q.exp();
            e / (1.0 + e)
        }
    }
}

/// Derivative of [`theta`], supported in `(0, 1)`.
pub fn theta_prime(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let q = 1.0 / (1.0 - x) - 1.0 / x;
    let dq = 1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x));
    let s = logistic_slope(q);
    if s == 0.0 {
        0.0
    } else {
        s * dq
    }
}

fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// `ln theta(x)`, finite on `(0, inf)` even where `theta` underflows.
pub fn ln_theta(x: f64) -> f64 {
    if x <= 0.0 {
        f64::NEG_INFINITY
    } else if x >= 1.0 {
        0.0
    } else {
        -softplus(1.0 / x - 1.0 / (1.0 - x))
    }
}

/// `ln theta'(x)`, finite on `(0, 1)`.
pub fn ln_theta_prime(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return f64::NEG_INFINITY;
    }
    let q = 1.0 / (1.0 - x) - 1.0 / x;
    let dq = 1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x));
    -q.abs() - 2.0 * (-q.abs()).exp().ln_1p() + dq.ln()
}

/// Unnormalised bump `exp(-1/(1 - t^2))` on `(-1, 1)`.
pub fn bump(t: f64) -> f64 {
    let u = 1.0 - t * t;
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

/// Smooth plateau: 1 on `[lo + width, hi - width]`, 0 outside `[lo, hi]`.
pub fn plateau(t: f64, lo: f64, hi: f64, width: f64) -> f64 {
    theta((t - lo) / width) * theta((hi - t) / width)
}
