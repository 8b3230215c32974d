//! Reading and writing sampled signals and scalograms.
//!
//! * `csv`: two columns `t,value`, optional header line, uniform `t`.
//! * `f64le`: raw little-endian `f64` samples plus a sidecar `<file>.json`
//!   holding `{"t0": .., "dt": ..}`.
//! * `scalogram`: the binary matrix written by `cwt` plus its sidecar.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use zygmund_core::transform::{SampledSignal, Scalogram, ScalogramSidecar};

use crate::error::{CliError, CliResult};
use crate::json;

/// Relative jitter of `t` tolerated by the CSV reader, in units of `dt`.
pub const JITTER_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    F64le,
    Scalogram,
}

#[derive(Debug, Serialize, Deserialize)]
struct SignalSidecar {
    t0: f64,
    dt: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// `Csv` for a `.csv` extension, `Scalogram` when the sidecar describes a
/// matrix, `F64le` otherwise.
pub fn infer_format(path: &Path) -> Format {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        return Format::Csv;
    }
    let is_matrix = fs::read_to_string(sidecar_path(path))
        .ok()
        .and_then(|t| serde_json::from_str::<serde_json::Value>(&t).ok())
        .is_some_and(|v| v.get("ny").is_some());
    if is_matrix {
        Format::Scalogram
    } else {
        Format::F64le
    }
}

/// Reads a signal from `path`.
pub fn ingest(path: &Path, format: Format) -> CliResult<SampledSignal> {
    match format {
        Format::Csv => {
            let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
            parse_csv(file)
        }
        Format::F64le => {
            let bytes = read_bytes(path)?;
            let side_path = sidecar_path(path);
            let side: SignalSidecar = serde_json::from_str(&read_text(&side_path)?)
                .map_err(|e| CliError::Ingest(format!("{}: {e}", side_path.display())))?;
            parse_f64le(&bytes, &side)
        }
        Format::Scalogram => Err(CliError::Usage("a scalogram cannot be read as a signal".into())),
    }
}

pub fn ingest_scalogram(path: &Path) -> CliResult<Scalogram> {
    let bytes = read_bytes(path)?;
    let side_path = sidecar_path(path);
    let side: ScalogramSidecar = serde_json::from_str(&read_text(&side_path)?)
        .map_err(|e| CliError::Ingest(format!("{}: {e}", side_path.display())))?;
    Ok(Scalogram::from_le_bytes(&bytes, &side)?)
}

fn parse_f64le(bytes: &[u8], side: &SignalSidecar) -> CliResult<SampledSignal> {
    if bytes.is_empty() {
        return Err(CliError::Ingest("input holds no samples".into()));
    }
    if bytes.len() % 8 != 0 {
        return Err(CliError::Ingest(format!("{} bytes is not a whole number of f64 values", bytes.len())));
    }
    let samples: Vec<f64> =
        bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8"))).collect();
    if let Some(n) = side.n {
        if n != samples.len() {
            return Err(CliError::Ingest(format!("sidecar says n = {n}, file holds {}", samples.len())));
        }
    }
    if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
        return Err(CliError::Ingest(format!("sample {i} is not finite ({})", samples[i])));
    }
    SampledSignal::new(samples, side.t0, side.dt).map_err(|e| CliError::Ingest(e.to_string()))
}

/// Parses `t,value` rows. A first line whose first field is not a number is
/// taken as a header.
pub fn parse_csv<R: Read>(reader: R) -> CliResult<SampledSignal> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut ts = Vec::new();
    let mut vs = Vec::new();
    let mut lines = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Ingest(format!("malformed CSV: {e}")))?;
        let line = rec.position().map_or(k as u64 + 1, |p| p.line());
        if rec.len() != 2 {
            return Err(CliError::Ingest(format!("row {line}: expected 2 columns, found {}", rec.len())));
        }
        let t = rec[0].parse::<f64>();
        if k == 0 && t.is_err() {
            continue;
        }
        let t = t.map_err(|_| CliError::Ingest(format!("row {line}: t = {:?} is not a number", &rec[0])))?;
        let v = rec[1]
            .parse::<f64>()
            .map_err(|_| CliError::Ingest(format!("row {line}: value = {:?} is not a number", &rec[1])))?;
        if !t.is_finite() || !v.is_finite() {
            return Err(CliError::Ingest(format!("row {line}: non-finite entry ({t}, {v})")));
        }
        ts.push(t);
        vs.push(v);
        lines.push(line);
    }
    match ts.len() {
        0 => return Err(CliError::Ingest("input holds no data rows".into())),
        1 => return Err(CliError::Ingest("one row does not determine a sample spacing".into())),
        _ => {}
    }
    let n = ts.len();
    let t0 = ts[0];
    let dt = (ts[n - 1] - t0) / (n - 1) as f64;
    if !(dt > 0.0) {
        return Err(CliError::Ingest(format!("t must increase, got t0 = {t0}, t_last = {}", ts[n - 1])));
    }
    for (i, (&t, &line)) in ts.iter().zip(&lines).enumerate() {
        let dev = (t - (t0 + i as f64 * dt)).abs();
        let tol = JITTER_TOL * dt + 4.0 * f64::EPSILON * t.abs().max(t0.abs());
        if dev > tol {
            return Err(CliError::Ingest(format!(
                "row {line} (index {i}): t = {t} is off the uniform grid by {dev:e} (relative jitter {:e} > {JITTER_TOL:e})",
                dev / dt
            )));
        }
    }
    SampledSignal::new(vs, t0, dt).map_err(|e| CliError::Ingest(e.to_string()))
}

/// Writes `signal` in `format` (`Csv` or `F64le`).
pub fn write_signal(path: &Path, format: Format, signal: &SampledSignal) -> CliResult<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let row_err = |e: csv::Error| CliError::io(path, e);
            w.write_record(["t", "value"]).map_err(row_err)?;
            for (i, v) in signal.samples().iter().enumerate() {
                w.write_record([signal.t(i).to_string(), v.to_string()]).map_err(row_err)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::io(path, e))?;
            write_bytes(path, &bytes)
        }
        Format::F64le => {
            let bytes: Vec<u8> = signal.samples().iter().flat_map(|v| v.to_le_bytes()).collect();
            write_bytes(path, &bytes)?;
            let side = SignalSidecar { t0: signal.t0(), dt: signal.dt(), n: Some(signal.len()) };
            write_bytes(&sidecar_path(path), json::to_string(&side).as_bytes())
        }
        Format::Scalogram => Err(CliError::Usage("signals are written as csv or f64le".into())),
    }
}

/// Writes the binary matrix and its sidecar; returns the sidecar path.
pub fn write_scalogram(path: &Path, s: &Scalogram) -> CliResult<PathBuf> {
    write_bytes(path, &s.to_le_bytes())?;
    let side = sidecar_path(path);
    write_bytes(&side, json::to_string(&s.sidecar()).as_bytes())?;
    Ok(side)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_row_csv() {
        let s = parse_csv("0,1\n0.5,2\n1,3".as_bytes()).unwrap();
        assert_eq!((s.len(), s.t0(), s.dt()), (3, 0.0, 0.5));
        assert_eq!(s.samples(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn header_and_whitespace_are_accepted() {
        let s = parse_csv("t, value\n 0.1, 4\n0.2 ,5\n0.3,6\n".as_bytes()).unwrap();
        assert_eq!(s.samples(), &[4.0, 5.0, 6.0]);
        assert!((s.dt() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn jitter_names_the_row() {
        let e = parse_csv("t,value\n0,1\n1.001,2\n2,3\n3,4\n".as_bytes()).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("row 3") && msg.contains("index 1"), "{msg}");
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn bad_contents() {
        for text in ["", "t,value\n", "0,1\n", "0,1\n1,nan\n", "0,1\n1\n", "0,1\n0,2\n", "0,1\n1,x\n"] {
            assert!(matches!(parse_csv(text.as_bytes()), Err(CliError::Ingest(_))), "{text:?}");
        }
    }

    #[test]
    fn f64le_checks() {
        let side = SignalSidecar { t0: 0.0, dt: 1.0, n: None };
        assert!(parse_f64le(&[0u8; 12], &side).is_err());
        assert!(parse_f64le(&[], &side).is_err());
        assert!(parse_f64le(&f64::NAN.to_le_bytes(), &side).is_err());
        let s = parse_f64le(&2.5f64.to_le_bytes(), &side).unwrap();
        assert_eq!(s.samples(), &[2.5]);
        let wrong_n = SignalSidecar { t0: 0.0, dt: 1.0, n: Some(2) };
        assert!(parse_f64le(&2.5f64.to_le_bytes(), &wrong_n).is_err());
    }
}
