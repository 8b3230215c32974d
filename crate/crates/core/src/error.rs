//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failure modes of the numerical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("admissibility constant vanishes (|c| = {value:e}, integrand scale {scale:e})")]
    ZeroAdmissibility { value: f64, scale: f64 },

    #[error("admissibility constant depends on direction (c+ = {plus}, c- = {minus})")]
    Anisotropy { plus: f64, minus: f64 },

    #[error("admissibility constant is not real (re = {re}, im = {im})")]
    ComplexAdmissibility { re: f64, im: f64 },

    #[error("scale {scale} is below the Nyquist guard 2*dt = {guard}")]
    Scale { scale: f64, guard: f64 },

    #[error("invalid input samples: {0}")]
    Input(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid configuration: {0}")]
    Configuration(String),

    #[error("division by a vanishing multiplier: {0}")]
    Division(String),

    #[error("degenerate signal: {0}")]
    DegenerateSignal(String),

    #[error("grid error: {0}")]
    Grid(String),
}

impl Error {
    /// Stable machine-readable code, used in JSON reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parameter(_) => "parameter",
            Error::Numeric(_) => "numeric",
            Error::Domain(_) => "domain",
            Error::ZeroAdmissibility { .. } => "zero_admissibility",
            Error::Anisotropy { .. } => "anisotropy",
            Error::ComplexAdmissibility { .. } => "complex_admissibility",
            Error::Scale { .. } => "scale",
            Error::Input(_) => "input",
            Error::Shape(_) => "shape",
            Error::Configuration(_) => "configuration",
            Error::Division(_) => "division",
            Error::DegenerateSignal(_) => "degenerate_signal",
            Error::Grid(_) => "grid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
