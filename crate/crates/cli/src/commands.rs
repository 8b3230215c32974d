//! Dispatch of a [`RunConfig`] to the library and assembly of the report.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use zygmund_core::kernels::{validate_lp_pair, LPPair, PairSpec, SpectralWavelet, WaveletSpec};
use zygmund_core::norms::{holder_norm, second_difference_norm, zygmund_norm};
use zygmund_core::pointwise::{cone_scan, fit_regularity, pointwise_fit};
use zygmund_core::signals::{SignalSpec, DEFAULT_LEN, DEFAULT_WINDOW};
use zygmund_core::transform::{cwt_forward, lp_pairing, reconstruct, Margin, SampledSignal, Scalogram, ScaleGrid};
use zygmund_core::weights::SlowlyVaryingWeight;

use crate::config::{Command, NormKind, RunConfig};
use crate::error::{CliError, CliResult};
use crate::ingest::{self, Format};
use crate::json;

pub const SCHEMA: &str = "zygmund-cwt/1";

const DEFAULT_WAVELET: WaveletSpec = WaveletSpec::BandBump { lo: 2.0, hi: 8.0 };
const DEFAULT_PAIR: PairSpec = PairSpec::Meyer { xi_pass: 0.5, xi_stop: 1.0 };

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize to JSON")
}

/// Parses `arg` as inline JSON when it starts with `{`, else as a JSON file.
fn load_spec<T: DeserializeOwned>(flag: &str, arg: &str) -> CliResult<T> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("--{flag}: cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn required<T: Copy>(flag: &str, v: Option<T>) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
}

fn required_path<'a>(flag: &str, v: &'a Option<PathBuf>) -> CliResult<&'a Path> {
    v.as_deref().ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
}

struct Ctx<'a>(&'a RunConfig);

impl Ctx<'_> {
    fn wavelet(&self) -> CliResult<SpectralWavelet> {
        let spec = match &self.0.options.wavelet {
            Some(arg) => load_spec("wavelet", arg)?,
            None => DEFAULT_WAVELET,
        };
        Ok(SpectralWavelet::from_spec(&spec)?)
    }

    fn pair(&self) -> CliResult<LPPair> {
        let spec = match &self.0.options.pair {
            Some(arg) => load_spec("pair", arg)?,
            None => DEFAULT_PAIR,
        };
        Ok(LPPair::from_spec(&spec)?)
    }

    fn weight(&self) -> CliResult<SlowlyVaryingWeight> {
        let w: SlowlyVaryingWeight = match &self.0.options.weight {
            Some(arg) => load_spec("weight", arg)?,
            None => SlowlyVaryingWeight::constant(),
        };
        w.validate()?;
        Ok(w)
    }

    fn input_format(&self, path: &Path) -> Format {
        self.0.options.format.unwrap_or_else(|| ingest::infer_format(path))
    }

    fn signal_at(&self, path: &Path) -> CliResult<SampledSignal> {
        if !path.exists() {
            return Err(CliError::io(path, "no such file"));
        }
        ingest::ingest(path, self.input_format(path))
    }

    fn signal(&self) -> CliResult<SampledSignal> {
        self.signal_at(required_path("input", &self.0.options.input)?)
    }

    /// `y_max = 1`, `y_min = max(4 dt, 2^-10)` and 16 voices unless overridden.
    fn grid(&self, dt: f64) -> CliResult<ScaleGrid> {
        let o = &self.0.options;
        let default = ScaleGrid::default_for(dt)?;
        let grid = ScaleGrid::new(
            o.ymin.unwrap_or(default.y_min),
            o.ymax.unwrap_or(default.y_max),
            o.voices.unwrap_or(default.voices),
        )?;
        Ok(match o.margin {
            Some(m) => grid.with_margin(Margin::Fixed(m))?,
            None => grid,
        })
    }
}

fn signal_summary(f: &SampledSignal) -> Value {
    json!({ "n": f.len(), "t0": f.t0(), "dt": f.dt() })
}

fn run_gen(cx: &Ctx) -> CliResult<Value> {
    let o = &cx.0.options;
    let arg = o.signal.as_deref().ok_or_else(|| CliError::Usage("--signal is required".into()))?;
    let mut spec: SignalSpec = load_spec("signal", arg)?;
    if let (Some(seed), SignalSpec::Weierstrass { levels, phases, .. }) = (o.seed, &mut spec) {
        if phases.is_empty() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            *phases = (0..=*levels).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        }
    }
    let (lo, hi) = match o.window.as_deref() {
        Some([lo, hi]) => (*lo, *hi),
        Some(_) => return Err(CliError::Usage("--window takes lo,hi".into())),
        None => DEFAULT_WINDOW,
    };
    let n = o.n.unwrap_or(DEFAULT_LEN);
    let f = spec.sample(lo, hi, n)?;
    let out = required_path("output", &o.output)?;
    let format = match o.format {
        Some(Format::Scalogram) => return Err(CliError::Usage("gen writes csv or f64le".into())),
        Some(f) => f,
        None if out.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => Format::Csv,
        None => Format::F64le,
    };
    ingest::write_signal(out, format, &f)?;
    Ok(json!({
        "signal": to_value(&spec),
        "window": [lo, hi],
        "sampled": signal_summary(&f),
        "output": out.display().to_string(),
        "format": to_value(&format),
    }))
}

fn run_cwt(cx: &Ctx) -> CliResult<Value> {
    let f = cx.signal()?;
    let psi = cx.wavelet()?;
    let grid = cx.grid(f.dt())?;
    let out = required_path("output", &cx.0.options.output)?;
    let s = cwt_forward(&f, &psi, &grid)?;
    let sidecar = ingest::write_scalogram(out, &s)?;
    let sup = (0..s.ny()).map(|j| s.interior_sup(j).0).fold(0.0, f64::max);
    Ok(json!({
        "wavelet": psi.id(),
        "input": signal_summary(&f),
        "grid": to_value(&grid),
        "scales": s.ny(),
        "interior": to_value(&s.interior()),
        "interior_sup": sup,
        "output": out.display().to_string(),
        "sidecar": sidecar.display().to_string(),
    }))
}

fn run_reconstruct(cx: &Ctx) -> CliResult<Value> {
    let f = cx.signal()?;
    let pair = cx.pair()?;
    let grid = cx.grid(f.dt())?;
    let (_, error) = reconstruct(&f, &pair, &grid)?;
    Ok(json!({
        "pair": pair.id(),
        "c": pair.c(),
        "input": signal_summary(&f),
        "grid": to_value(&grid),
        "relative_sup_error": error,
    }))
}

fn run_norm(cx: &Ctx) -> CliResult<Value> {
    let o = &cx.0.options;
    let f = cx.signal()?;
    let weight = cx.weight()?;
    let kind = o.norm.unwrap_or_default();
    let margin = o.margin.unwrap_or(0.0);
    let report = match kind {
        NormKind::Zygmund => {
            let pair = cx.pair()?;
            zygmund_norm(&f, &pair, &weight, required("alpha", o.alpha)?, &cx.grid(f.dt())?)?
        }
        NormKind::Holder => holder_norm(&f, &weight, required("alpha", o.alpha)?, margin)?,
        NormKind::SecondDifference => second_difference_norm(&f, &weight, o.order.unwrap_or(0), margin)?,
    };
    Ok(json!({
        "norm": to_value(&kind),
        "weight": weight.to_string(),
        "input": signal_summary(&f),
        "report": to_value(&report),
    }))
}

fn run_estimate(cx: &Ctx) -> CliResult<Value> {
    let o = &cx.0.options;
    let path = required_path("input", &o.input)?;
    if !path.exists() {
        return Err(CliError::io(path, "no such file"));
    }
    let s: Scalogram = match cx.input_format(path) {
        Format::Scalogram => ingest::ingest_scalogram(path)?,
        _ => {
            let f = cx.signal_at(path)?;
            cwt_forward(&f, &cx.wavelet()?, &cx.grid(f.dt())?)?
        }
    };
    let range = (o.ymin.unwrap_or_else(|| s.grid().finest()), o.ymax.unwrap_or(s.grid().y_max));
    let report = match o.x0 {
        Some(x0) => pointwise_fit(&s, x0, o.cone_width.unwrap_or(1.0), o.log_basis, range)?,
        None => fit_regularity(&s, o.log_basis, range)?,
    };
    Ok(json!({ "wavelet": s.wavelet(), "report": to_value(&report) }))
}

/// `2^{-j/2}` for `j = 4..=14`.
fn default_eps() -> Vec<f64> {
    (4..=14).map(|j| 2f64.powf(-(j as f64) / 2.0)).collect()
}

fn run_scan_point(cx: &Ctx) -> CliResult<Value> {
    let o = &cx.0.options;
    let f = cx.signal()?;
    let psi = cx.wavelet()?;
    let weight = cx.weight()?;
    let eps = o.eps.clone().unwrap_or_else(default_eps);
    let r = cone_scan(&f, &psi, required("x0", o.x0)?, required("alpha", o.alpha)?, &weight, o.k.unwrap_or(1), &eps)?;
    Ok(json!({ "report": to_value(&r) }))
}

fn run_lp_pair(cx: &Ctx) -> CliResult<Value> {
    let o = &cx.0.options;
    let pair = cx.pair()?;
    let alpha = o.alpha.unwrap_or(0.0);
    let validation = validate_lp_pair(&pair, alpha);
    let mut out = json!({
        "pair": pair.id(),
        "tau": pair.tau(),
        "sigma": pair.sigma(),
        "r": pair.r(),
        "c": pair.c(),
        "order": pair.order(),
        "validation": to_value(&validation),
    });
    match (&o.input, &o.theta) {
        (Some(_), Some(theta_path)) => {
            let f = cx.signal()?;
            let theta = cx.signal_at(theta_path)?;
            let rep = lp_pairing(&f, &theta, &pair, &cx.grid(f.dt())?)?;
            out["pairing"] = to_value(&rep);
            out["pairing"]["relative_error"] = json!(rep.relative_error());
        }
        (None, None) => {}
        _ => return Err(CliError::Usage("pairing needs both --input and --theta".into())),
    }
    Ok(out)
}

/// Runs the command and returns its `result` object.
pub fn run(config: &RunConfig) -> CliResult<Value> {
    let cx = Ctx(config);
    match config.command {
        Command::Gen => run_gen(&cx),
        Command::Cwt => run_cwt(&cx),
        Command::Reconstruct => run_reconstruct(&cx),
        Command::Norm => run_norm(&cx),
        Command::Estimate => run_estimate(&cx),
        Command::ScanPoint => run_scan_point(&cx),
        Command::LpPair => run_lp_pair(&cx),
    }
}

/// The versioned report wrapping a result or an error.
pub fn envelope(config: &RunConfig, outcome: &CliResult<Value>) -> Value {
    let mut v = json!({
        "schema": SCHEMA,
        "command": config.command.name(),
        "seed": config.options.seed,
        "config": to_value(config),
    });
    match outcome {
        Ok(result) => {
            v["status"] = json!("ok");
            v["result"] = result.clone();
        }
        Err(e) => {
            v["status"] = json!("error");
            v["error"] = json!({ "code": e.code(), "message": e.to_string() });
        }
    }
    v
}

/// Where the report goes: `--report` for commands whose `--output` is a
/// data file, `--output` otherwise; `None` means stdout.
pub fn report_path(config: &RunConfig) -> Option<&Path> {
    match config.command {
        Command::Cwt | Command::Gen => config.options.report.as_deref(),
        _ => config.options.output.as_deref(),
    }
}

/// Runs `config`, writes the report and returns the exit code.
pub fn execute(config: &RunConfig) -> u8 {
    let outcome = run(config);
    let text = json::to_string(&envelope(config, &outcome)) + "\n";
    let code = outcome.as_ref().map_or_else(CliError::exit_code, |_| 0);
    if let Err(e) = &outcome {
        eprintln!("zygmund {}: {e}", config.command.name());
    }
    match report_path(config) {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("zygmund: cannot write report {}: {e}", path.display());
                print!("{text}");
                return code.max(1);
            }
        }
        None => print!("{text}"),
    }
    code
}
