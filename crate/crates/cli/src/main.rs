use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use zygmund_cli::{execute, json, Cli, RunConfig, SCHEMA};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let report = json!({
                "schema": SCHEMA,
                "status": "error",
                "error": { "code": "usage", "message": e.kind().to_string() },
            });
            println!("{}", json::to_string(&report));
            return ExitCode::from(1);
        }
    };
    ExitCode::from(execute(&RunConfig::from(cli)))
}
