//! Command-line surface.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::ingest::Format;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Subcommand)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Wavelet transform of a signal, written as a binary scalogram.
    Cwt,
    /// Forward transform followed by synthesis with an LP pair.
    Reconstruct,
    /// Zygmund, Hölder or second-difference norm of a signal.
    Norm,
    /// Fit of the growth law y^alpha (1 + |ln y|)^beta to scale maxima.
    Estimate,
    /// Cone scan of the transform around a point.
    ScanPoint,
    /// Checks an LP pair and optionally evaluates the pairing identity.
    LpPair,
    /// Writes a synthetic signal.
    Gen,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Cwt => "cwt",
            Command::Reconstruct => "reconstruct",
            Command::Norm => "norm",
            Command::Estimate => "estimate",
            Command::ScanPoint => "scan-point",
            Command::LpPair => "lp-pair",
            Command::Gen => "gen",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum NormKind {
    #[default]
    Zygmund,
    Holder,
    SecondDifference,
}

/// Options shared by all commands; each command reads the ones it needs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, clap::Args)]
pub struct Options {
    /// Input signal (csv or f64le) or scalogram.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Report path; for `cwt` and `gen` the data file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Report path for `cwt` and `gen` (stdout when absent).
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// File format; inferred from the extension and sidecar when absent.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// LP pair as inline JSON or a JSON file.
    #[arg(long, global = true)]
    pub pair: Option<String>,
    /// Wavelet as inline JSON or a JSON file.
    #[arg(long, global = true)]
    pub wavelet: Option<String>,
    /// Weight as inline JSON or a JSON file.
    #[arg(long, global = true)]
    pub weight: Option<String>,
    /// Signal description for `gen`, inline JSON or a JSON file.
    #[arg(long, global = true)]
    pub signal: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub ymin: Option<f64>,
    #[arg(long, global = true)]
    pub ymax: Option<f64>,
    #[arg(long, global = true)]
    pub voices: Option<u32>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    #[arg(long, global = true)]
    pub k: Option<u32>,
    /// Interior margin in time units; automatic when absent.
    #[arg(long, global = true)]
    pub margin: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of samples for `gen`.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Sampling window `lo,hi` for `gen`.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub window: Option<Vec<f64>>,
    #[arg(long, global = true, value_enum)]
    pub norm: Option<NormKind>,
    /// Derivative order `p` of the second-difference norm.
    #[arg(long, global = true)]
    pub order: Option<u32>,
    /// Half-width of the cone `|x - x0| <= w y` for pointwise estimates.
    #[arg(long, global = true)]
    pub cone_width: Option<f64>,
    /// Add the `ln(1 + |ln y|)` regressor.
    #[arg(long, global = true)]
    pub log_basis: bool,
    /// Radii of the cone scan, comma separated and decreasing.
    #[arg(long, global = true, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    /// Test signal for the pairing evaluation of `lp-pair`.
    #[arg(long, global = true)]
    pub theta: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "zygmund", version, about = "Wavelet analysis of Hölder-Zygmund regularity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

/// One fully parsed invocation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(flatten)]
    pub options: Options,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        RunConfig { command: cli.command, options: cli.options }
    }
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig { command, options: Options::default() }
    }
}
