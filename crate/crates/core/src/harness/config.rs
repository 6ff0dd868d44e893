//! Sweep configuration: a TOML document whose keys mirror the parameter
//! structs, with `key.path=value` overrides applied before validation.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::equalizers::{EsnParams, FfeParams, FnnParams};
use crate::error::{Error, Result};

use super::link::{LinkParams, Receiver};

/// Full-size statistics selected by `--paper-scale`.
pub const FULL_SCALE_SYMBOLS: usize = 200_000;
pub const FULL_SCALE_MEASUREMENTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EqualizerKind {
    Esn,
    Ffe,
    Fnn,
}

impl EqualizerKind {
    pub fn label(self) -> &'static str {
        match self {
            EqualizerKind::Esn => "esn",
            EqualizerKind::Ffe => "ffe",
            EqualizerKind::Fnn => "fnn",
        }
    }
}

/// One equalizer family. ESN entries expand into one variant per
/// `n_neurons` value; an empty list uses `esn.n_neurons`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EqualizerSpec {
    pub kind: EqualizerKind,
    #[serde(default)]
    pub n_neurons: Vec<usize>,
    #[serde(default)]
    pub esn: EsnParams,
    #[serde(default)]
    pub ffe: FfeParams,
    #[serde(default)]
    pub fnn: FnnParams,
}

impl EqualizerSpec {
    pub fn new(kind: EqualizerKind) -> Self {
        Self {
            kind,
            n_neurons: Vec::new(),
            esn: EsnParams::default(),
            ffe: FfeParams::default(),
            fnn: FnnParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    /// Symbols per measurement.
    pub symbols: usize,
    pub measurements: usize,
    /// Measurement `i` uses seed `base_seed ^ i`.
    pub base_seed: u64,
    /// Leading fraction of each measurement used for training.
    pub train_fraction: f64,
    /// Samples excluded from ESN training and from threshold estimation.
    pub washout: usize,
    pub distances_km: Vec<f64>,
    /// OSNR in dB per 0.1 nm; `inf` disables amplifier noise.
    pub osnr_db: Vec<f64>,
    pub receivers: Vec<Receiver>,
    pub equalizers: Vec<EqualizerSpec>,
    /// Draw a fresh reservoir per measurement seed instead of one per sweep.
    pub redraw_reservoir: bool,
    pub link: LinkParams,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: "sweep".into(),
            symbols: 50_000,
            measurements: 5,
            base_seed: 1,
            train_fraction: 0.05,
            washout: 1000,
            distances_km: vec![0.0],
            osnr_db: vec![30.0],
            receivers: vec![Receiver::BROADBAND],
            equalizers: vec![EqualizerSpec::new(EqualizerKind::Esn)],
            redraw_reservoir: true,
            link: LinkParams::default(),
            output: None,
        }
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::from_toml_with_overrides(text, &[])
    }

    /// Parse `text`, apply `key.path=value` overrides, then validate.
    pub fn from_toml_with_overrides(text: &str, overrides: &[String]) -> Result<Self> {
        let mut doc: toml::Table = text.parse().map_err(|e| config_err(format!("{e}")))?;
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        let cfg: Self = toml::Value::Table(doc)
            .try_into()
            .map_err(|e: toml::de::Error| config_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_with_overrides(&text, overrides)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| config_err(e.to_string()))
    }

    /// Full-size statistics: 200k symbols and 10 measurements per point.
    pub fn paper_scale(mut self) -> Self {
        self.symbols = FULL_SCALE_SYMBOLS;
        self.measurements = FULL_SCALE_MEASUREMENTS;
        self
    }

    pub fn train_symbols(&self) -> usize {
        (self.train_fraction * self.symbols as f64).ceil() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.distances_km.is_empty()
            || self.osnr_db.is_empty()
            || self.receivers.is_empty()
            || self.equalizers.is_empty()
        {
            return Err(config_err(
                "distance, OSNR, receiver and equalizer lists must be non-empty",
            ));
        }
        if self.measurements == 0 {
            return Err(config_err("measurements must be at least 1"));
        }
        if self.symbols < 20 * self.washout {
            return Err(config_err(format!(
                "{} symbols is fewer than 20 x washout ({})",
                self.symbols, self.washout
            )));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(config_err("train_fraction must lie in (0, 1)"));
        }
        if self.train_symbols() * self.link.sps_dsp <= self.washout {
            return Err(config_err("training prefix is shorter than the washout"));
        }
        if let Some(d) = self
            .distances_km
            .iter()
            .find(|d| !(d.is_finite() && **d >= 0.0))
        {
            return Err(config_err(format!(
                "distance {d} km is not a finite non-negative length"
            )));
        }
        if let Some(o) = self.osnr_db.iter().find(|o| o.is_nan()) {
            return Err(config_err(format!("OSNR {o} dB is not a number")));
        }
        self.link
            .validate()
            .map_err(|e| config_err(e.to_string()))?;
        for r in &self.receivers {
            r.bank(&self.link)
                .map_err(|e| config_err(format!("receiver {}: {e}", r.label())))?;
        }
        for e in &self.equalizers {
            let bad = |err: Error| config_err(format!("{} equalizer: {err}", e.kind.label()));
            match e.kind {
                EqualizerKind::Esn => {
                    e.esn.validate().map_err(bad)?;
                    if e.n_neurons.contains(&0) {
                        return Err(config_err("n_neurons entries must be at least 1"));
                    }
                }
                EqualizerKind::Ffe => e.ffe.validate().map_err(bad)?,
                EqualizerKind::Fnn => {
                    e.fnn.validate().map_err(bad)?;
                    if e.fnn.sps != self.link.sps_dsp {
                        return Err(config_err(format!(
                            "FNN expects {} samples per symbol but the link delivers {}",
                            e.fnn.sps, self.link.sps_dsp
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Set `path = value` in `doc`. The value is read as a TOML value when it
/// parses as one and as a bare string otherwise.
fn apply_override(doc: &mut toml::Table, assignment: &str) -> Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| config_err(format!("override {assignment:?} is not key=value")))?;
    let value = format!("v = {}", raw.trim())
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.trim().to_string()));
    let keys: Vec<&str> = path.trim().split('.').collect();
    let (last, parents) = keys.split_last().expect("split yields at least one key");
    let mut table = doc;
    for k in parents {
        let entry = table
            .entry(k.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| config_err(format!("override path {path}: {k} is not a table")))?;
    }
    table.insert(last.to_string(), value);
    Ok(())
}
