//! Result records and their serialization.
//!
//! Determinism contract: the emitted bytes depend only on the
//! science-relevant part of the configuration.  The config echo therefore
//! excludes the worker count and the output path, and the wall-clock time
//! lives only on the in-memory record (`#[serde(skip)]`), never in the
//! file.  Rerunning an experiment with the same seed and parameters
//! reproduces the output byte for byte at any worker count.
//!
//! Formats:
//! * CSV (`schema v1`): a header row plus one row per result point,
//!   RFC 4180 quoting, `.` decimal separator, floats at 17 significant
//!   digits (round-trip exact for f64).  The config echo and summary are
//!   not part of the CSV; they live in the JSON format.
//! * JSON: the full record (schema version, config echo, rows, summary)
//!   pretty-printed with stable key order.

use super::config::{EnsembleChoice, ExperimentConfig, OutputFormat};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Version tag of the serialized schema.
pub const SCHEMA_VERSION: &str = "1";

/// One evaluated point of an experiment.
///
/// `abs_error` is the experiment's declared error measure for the row
/// (absolute deviation unless the row label says otherwise).  `pass` is
/// `Some` only on rows that participate in the accept/reject decision;
/// purely informational rows carry `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub label: String,
    pub input_a: f64,
    pub input_b: Option<f64>,
    pub computed: f64,
    pub reference: f64,
    pub abs_error: f64,
    pub std_error: Option<f64>,
    pub tolerance: f64,
    pub pass: Option<bool>,
}

/// Mechanical digest of the rows: counts of decision rows and failures,
/// the largest error column value, and the overall verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub checked: usize,
    pub failed: usize,
    pub max_abs_error: f64,
    pub passed: bool,
    pub note: String,
}

/// The part of the configuration that determines the numbers.  Worker
/// count and output path are intentionally absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub experiment: String,
    pub matrix_dims: Vec<usize>,
    pub order: u8,
    pub u: f64,
    pub window: f64,
    pub bins: usize,
    pub samples: u64,
    pub seed: u64,
    pub scale: Option<f64>,
    pub ensemble: EnsembleChoice,
}

impl ConfigEcho {
    pub fn from_config(config: &ExperimentConfig) -> Self {
        ConfigEcho {
            experiment: config.experiment.name().to_string(),
            matrix_dims: config.matrix_dims.clone(),
            order: config.order,
            u: config.u,
            window: config.window,
            bins: config.bins,
            samples: config.samples,
            seed: config.seed,
            scale: config.scale,
            ensemble: config.ensemble,
        }
    }
}

/// A finished experiment: config echo, per-point rows, summary, and the
/// (unserialized) wall-clock time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema_version: String,
    pub config: ConfigEcho,
    pub rows: Vec<ResultRow>,
    pub summary: Summary,
    #[serde(skip)]
    pub wall_clock_seconds: f64,
}

/// 17-significant-digit float formatting: parses back to the identical
/// f64 bit pattern.
fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// RFC 4180 quoting: wrap when the field holds a comma, quote, or line
/// break; double interior quotes.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl ResultRecord {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("record serializes");
        text.push('\n');
        text
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "label,input_a,input_b,computed,reference,abs_error,std_error,tolerance,pass\n",
        );
        for row in &self.rows {
            out.push_str(&csv_field(&row.label));
            out.push(',');
            out.push_str(&fmt_float(row.input_a));
            out.push(',');
            if let Some(b) = row.input_b {
                out.push_str(&fmt_float(b));
            }
            out.push(',');
            out.push_str(&fmt_float(row.computed));
            out.push(',');
            out.push_str(&fmt_float(row.reference));
            out.push(',');
            out.push_str(&fmt_float(row.abs_error));
            out.push(',');
            if let Some(se) = row.std_error {
                out.push_str(&fmt_float(se));
            }
            out.push(',');
            out.push_str(&fmt_float(row.tolerance));
            out.push(',');
            if let Some(p) = row.pass {
                out.push_str(if p { "true" } else { "false" });
            }
            out.push('\n');
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

/// Write the record to `path` in the given format.
pub fn emit(record: &ResultRecord, format: OutputFormat, path: &Path) -> Result<()> {
    std::fs::write(path, record.render(format)).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("cannot write {}: {e}", path.display()),
        ))
    })
}
