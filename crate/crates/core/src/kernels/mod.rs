//! Wavelets, low-pass kernels and Littlewood-Paley pairs, all defined on
//! the Fourier side.

mod lowpass;
mod pair;
pub(crate) mod profile;
mod wavelet;

pub use lowpass::LowPass;
pub use pair::{
    admissibility_constant, make_meyer_lp_pair, validate_lp_pair, LPPair, PairSpec,
    ValidationCheck, ValidationReport,
};
pub use wavelet::{
    make_band_bump, moment, nondegeneracy_index, HasMoments, Moments, SpectralWavelet,
    WaveletSpec, DEFAULT_DECAY_TOL, DEFAULT_NONDEGENERACY_TOL,
};
