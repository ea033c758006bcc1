use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1";

/// Envelope of every JSON result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub schema_version: String,
    pub command: String,
    pub base: Vec<f64>,
    pub payload: Value,
}

impl RunOutput {
    pub fn new(command: &str, base: &[f64], payload: impl Serialize) -> Result<Self, CliError> {
        Ok(RunOutput {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            base: base.to_vec(),
            payload: serde_json::to_value(payload).map_err(|e| CliError::Io(e.to_string()))?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("values are finite")
    }
}

/// A real with 17 significant digits.
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Renders a CSV table with `\n` line endings.
pub fn csv(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    f.write_all(contents.as_bytes())
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Uniform samples `lo + k / per_unit` in `[lo, hi)` together with the
/// points just left and right of every breakpoint.
pub fn sample_points(lo: f64, hi: f64, per_unit: usize, breakpoints: &[f64], offset: f64) -> Vec<f64> {
    let n = ((hi - lo) * per_unit as f64).ceil().max(1.0) as usize;
    let mut xs: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
    for &b in breakpoints {
        xs.extend([b - offset, b + offset]);
    }
    xs.retain(|&x| x >= lo && x < hi);
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    xs.dedup();
    xs
}
