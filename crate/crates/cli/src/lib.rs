//! Command-line front end for `zygmund-core`.
//!
//! Every run produces one JSON report with a fixed schema tag, the echoed
//! configuration and either a `result` or an `error` object. Floats are
//! printed with 17 significant digits so identical runs give identical bytes.

pub mod commands;
pub mod config;
pub mod error;
pub mod ingest;
pub mod json;

pub use commands::{envelope, execute, run, SCHEMA};
pub use config::{Cli, Command, NormKind, Options, RunConfig};
pub use error::{CliError, CliResult};
pub use ingest::{ingest, parse_csv, write_signal, Format};
