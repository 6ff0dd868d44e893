//! CSV and JSON result files.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::sweep::{RecordKind, ResultRecord};

pub const CSV_HEADER: [&str; 17] = [
    "distance_km",
    "osnr_db",
    "n_pds",
    "slice_set",
    "equalizer",
    "n_neurons",
    "seed",
    "errors",
    "bits",
    "ber",
    "ci_low",
    "ci_high",
    "below_kp4",
    "train_mse",
    "wall_s",
    "kind",
    "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown output format {other:?}"))),
        }
    }
}

impl Format {
    /// Format implied by a file extension, CSV otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// Three significant digits in scientific notation, e.g. `2.25e-4`.
pub fn sci3(v: f64) -> String {
    format!("{v:.2e}")
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

fn csv_row(r: &ResultRecord) -> Vec<String> {
    vec![
        r.distance_km.to_string(),
        r.osnr_db.map_or_else(|| "inf".into(), |v| v.to_string()),
        r.n_pds.to_string(),
        r.slice_set.clone(),
        r.equalizer.clone(),
        opt(r.n_neurons, |v| v.to_string()),
        opt(r.seed, |v| v.to_string()),
        opt(r.errors, |v| v.to_string()),
        opt(r.bits, |v| v.to_string()),
        opt(r.ber, sci3),
        opt(r.ci_low, sci3),
        opt(r.ci_high, sci3),
        opt(r.below_kp4, |v| v.to_string()),
        opt(r.train_mse, sci3),
        opt(r.wall_s, |v| format!("{v:.3}")),
        match r.kind {
            RecordKind::Measurement => "measurement".into(),
            RecordKind::Summary => "summary".into(),
        },
        r.status.clone(),
    ]
}

pub fn write_csv<W: Write>(records: &[ResultRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        w.write_record(csv_row(r)).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(records: &[ResultRecord], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, records).map_err(|e| Error::Io(e.into()))?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_json(text: &str) -> Result<Vec<ResultRecord>> {
    serde_json::from_str(text).map_err(|e| Error::Format {
        what: "result JSON",
        reason: e.to_string(),
    })
}

/// Write `records` to `path` in `format`.
pub fn emit(records: &[ResultRecord], format: Format, path: &Path) -> Result<()> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    match format {
        Format::Csv => write_csv(records, file),
        Format::Json => write_json(records, file),
    }
}
