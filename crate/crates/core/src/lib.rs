//! Numerical harmonic analysis on sampled 1-D signals: continuous wavelet
//! transforms, Littlewood-Paley pairs, weighted Hölder-Zygmund norms and
//! regularity estimation with logarithmic corrections.
//!
//! Conventions: `f_hat(xi) = int f(t) e^{-i xi t} dt`, and the wavelet
//! transform of `f` at position `x` and scale `y` is
//! `W f(x, y) = (1/y) int f(t) conj(psi((t - x)/y)) dt`.

pub mod error;
pub mod kernels;
pub mod norms;
pub mod pointwise;
pub mod signals;
pub mod smooth;
mod spectral;
pub mod transform;
pub mod weights;

pub use error::{Error, Result};
