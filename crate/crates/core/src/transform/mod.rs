//! Forward wavelet transform, synthesis, reconstruction and Fourier
//! multipliers on zero-padded grids.
//!
//! Every sampled signal is padded with zeros to at least twice its length
//! before transforming, and every supremum is taken over an interior window
//! that keeps a margin from both edges.

mod cwt;
mod grid;
mod multiplier;
mod pairing;
mod signal;

pub use cwt::{cwt_forward, reconstruct, synthesize, Scalogram, ScalogramSidecar};
pub use grid::{Interior, Margin, ScaleGrid};
pub use multiplier::{bessel_potential, derivative, lowpass};
pub use pairing::{lp_pairing, PairingReport};
pub use signal::SampledSignal;
