//! Trainable equalizers mapping detected channels to soft symbol estimates.
//!
//! All three equalizers standardize each channel with statistics from the
//! training prefix, train against known bipolar symbols, and return soft
//! values indexed by symbol.

mod blob;
pub mod esn;
pub mod ffe;
pub mod fnn;
mod linalg;
pub mod sparse;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::frontend::DetectedChannels;
use crate::sigkit::{resample_real, RealWaveform};

pub use blob::{EQLZ_MAGIC, EQLZ_VERSION};
pub use esn::{esn_equalize, esn_init, esn_step, esn_train_readout, EsnModel, EsnParams};
pub use ffe::{ffe_train, ffe_train_apply, FfeParams, FfeState, FFE_SPS};
pub use fnn::{fnn_infer, fnn_train, fnn_window_features, FnnModel, FnnParams, WindowFeatures};
pub use sparse::CsrMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub train_mse: f64,
    pub n_train_samples: usize,
    pub converged: bool,
    pub iterations: usize,
    pub min_norm_fallback: bool,
}

/// Soft estimates for symbols `first_symbol .. first_symbol + values.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftSymbols {
    pub first_symbol: usize,
    pub values: Vec<f64>,
}

impl SoftSymbols {
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(self.first_symbol)
            .and_then(|i| self.values.get(i).copied())
    }

    /// One past the last covered symbol.
    pub fn end(&self) -> usize {
        self.first_symbol + self.values.len()
    }
}

/// Per-channel zero-mean, unit-variance scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    /// Fit on the first `n` samples of every channel.
    pub fn fit(channels: &[Vec<f64>], n: usize) -> Result<Self> {
        if channels.is_empty() || n == 0 {
            return invalid("standardizer needs at least one channel and one sample");
        }
        let mut mean = Vec::with_capacity(channels.len());
        let mut std = Vec::with_capacity(channels.len());
        for c in channels {
            let s = &c[..n.min(c.len())];
            let m = s.iter().sum::<f64>() / s.len() as f64;
            let v = s.iter().map(|x| (x - m).powi(2)).sum::<f64>() / s.len() as f64;
            mean.push(m);
            // A silent channel passes through centred but unscaled.
            std.push(if v > 0.0 { v.sqrt() } else { 1.0 });
        }
        Ok(Self { mean, std })
    }

    pub fn apply(&self, channels: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        if channels.len() != self.mean.len() {
            return invalid(format!(
                "{} channels given, equalizer trained on {}",
                channels.len(),
                self.mean.len()
            ));
        }
        Ok(channels
            .iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(c, (m, s))| c.iter().map(|x| (x - m) / s).collect())
            .collect())
    }
}

/// Common interface: train on a known symbol prefix, then equalize.
pub trait Equalizer: Send {
    fn name(&self) -> &'static str;

    /// `known[n]` is the bipolar value of symbol `n`; `rx` carries `sps`
    /// samples per symbol with symbol `n` centred on sample `n·sps`.
    fn train(&mut self, rx: &DetectedChannels, sps: usize, known: &[f64]) -> Result<TrainReport>;

    fn equalize(&mut self, rx: &DetectedChannels, sps: usize) -> Result<SoftSymbols>;
}

fn check_training(rx: &DetectedChannels, sps: usize, known: &[f64]) -> Result<()> {
    if sps == 0 {
        return invalid("sps must be at least 1");
    }
    if known.is_empty() {
        return invalid("training needs at least one known symbol");
    }
    if known.len() * sps > rx.len() {
        return invalid(format!(
            "{} known symbols exceed the {} received samples",
            known.len(),
            rx.len()
        ));
    }
    Ok(())
}

fn untrained(name: &str) -> Error {
    Error::InvalidState(format!("{name} equalizer has not been trained"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EsnEqualizer {
    pub params: EsnParams,
    model: Option<EsnModel>,
    scaler: Option<Standardizer>,
}

impl EsnEqualizer {
    pub fn new(params: EsnParams) -> Self {
        Self {
            params,
            model: None,
            scaler: None,
        }
    }

    /// Reuse an already drawn reservoir (its readout is retrained).
    pub fn with_reservoir(params: EsnParams, model: EsnModel) -> Self {
        Self {
            params,
            model: Some(model),
            scaler: None,
        }
    }

    pub fn model(&self) -> Option<&EsnModel> {
        self.model.as_ref()
    }
}

impl Equalizer for EsnEqualizer {
    fn name(&self) -> &'static str {
        "esn"
    }

    fn train(&mut self, rx: &DetectedChannels, sps: usize, known: &[f64]) -> Result<TrainReport> {
        check_training(rx, sps, known)?;
        let scaler = Standardizer::fit(&rx.channels, known.len() * sps)?;
        let inputs = scaler.apply(&rx.channels)?;
        let k = rx.n_channels();
        let mut model = match self.model.take() {
            Some(m) if m.input_dim() == k + 1 => m,
            _ => esn_init(&self.params, k)?,
        };
        let report = esn_train_readout(&mut model, &inputs, sps, known, &self.params);
        self.model = Some(model);
        let report = report?;
        self.scaler = Some(scaler);
        Ok(report)
    }

    fn equalize(&mut self, rx: &DetectedChannels, sps: usize) -> Result<SoftSymbols> {
        let scaler = self.scaler.as_ref().ok_or_else(|| untrained("ESN"))?;
        let model = self.model.as_mut().ok_or_else(|| untrained("ESN"))?;
        let inputs = scaler.apply(&rx.channels)?;
        let values = esn_equalize(model, &inputs, sps, self.params.readout_delay)?;
        Ok(SoftSymbols {
            first_symbol: 0,
            values,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FfeEqualizer {
    pub params: FfeParams,
    state: Option<FfeState>,
    scaler: Option<Standardizer>,
}

impl FfeEqualizer {
    pub fn new(params: FfeParams) -> Self {
        Self {
            params,
            state: None,
            scaler: None,
        }
    }

    pub fn state(&self) -> Option<&FfeState> {
        self.state.as_ref()
    }
}

/// Channels at `FFE_SPS` samples per symbol.
fn to_ffe_rate(rx: &DetectedChannels, sps: usize) -> Result<Vec<Vec<f64>>> {
    if sps == FFE_SPS {
        return Ok(rx.channels.clone());
    }
    let target = rx.sample_rate * FFE_SPS as f64 / sps as f64;
    rx.channels
        .iter()
        .map(|c| {
            let w = RealWaveform::new(c.clone(), rx.sample_rate)?;
            Ok(resample_real(&w, target)?.samples)
        })
        .collect()
}

impl Equalizer for FfeEqualizer {
    fn name(&self) -> &'static str {
        "ffe"
    }

    fn train(&mut self, rx: &DetectedChannels, sps: usize, known: &[f64]) -> Result<TrainReport> {
        check_training(rx, sps, known)?;
        let ch = to_ffe_rate(rx, sps)?;
        let scaler = Standardizer::fit(&ch, known.len() * FFE_SPS)?;
        let ch = scaler.apply(&ch)?;
        let (state, report) = ffe_train(&ch, known, &self.params)?;
        self.state = Some(state);
        self.scaler = Some(scaler);
        Ok(report)
    }

    fn equalize(&mut self, rx: &DetectedChannels, sps: usize) -> Result<SoftSymbols> {
        let scaler = self.scaler.as_ref().ok_or_else(|| untrained("FFE"))?;
        let state = self.state.as_ref().ok_or_else(|| untrained("FFE"))?;
        let ch = scaler.apply(&to_ffe_rate(rx, sps)?)?;
        Ok(SoftSymbols {
            first_symbol: 0,
            values: state.apply(&ch),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FnnEqualizer {
    pub params: FnnParams,
    pub seed: u64,
    model: Option<FnnModel>,
    scaler: Option<Standardizer>,
}

impl FnnEqualizer {
    pub fn new(params: FnnParams, seed: u64) -> Self {
        Self {
            params,
            seed,
            model: None,
            scaler: None,
        }
    }

    pub fn model(&self) -> Option<&FnnModel> {
        self.model.as_ref()
    }

    fn check_sps(&self, sps: usize) -> Result<()> {
        if sps != self.params.sps {
            return invalid(format!(
                "FNN configured for {} samples per symbol, got {sps}",
                self.params.sps
            ));
        }
        Ok(())
    }
}

impl Equalizer for FnnEqualizer {
    fn name(&self) -> &'static str {
        "fnn"
    }

    fn train(&mut self, rx: &DetectedChannels, sps: usize, known: &[f64]) -> Result<TrainReport> {
        check_training(rx, sps, known)?;
        self.check_sps(sps)?;
        let scaler = Standardizer::fit(&rx.channels, known.len() * sps)?;
        let ch = scaler.apply(&rx.channels)?;
        let feats = fnn_window_features(&ch, sps, self.params.window_symbols)?;
        let train = feats.symbol_range(0, known.len());
        if train.n_rows() == 0 {
            return invalid("training prefix shorter than one feature window");
        }
        let targets = &known[train.first_symbol..train.first_symbol + train.n_rows()];
        let (model, report) = fnn_train(&train.rows, targets, &self.params, self.seed)?;
        self.model = Some(model);
        self.scaler = Some(scaler);
        Ok(report)
    }

    fn equalize(&mut self, rx: &DetectedChannels, sps: usize) -> Result<SoftSymbols> {
        self.check_sps(sps)?;
        let scaler = self.scaler.as_ref().ok_or_else(|| untrained("FNN"))?;
        let model = self.model.as_ref().ok_or_else(|| untrained("FNN"))?;
        let ch = scaler.apply(&rx.channels)?;
        let feats = fnn_window_features(&ch, sps, self.params.window_symbols)?;
        Ok(SoftSymbols {
            first_symbol: feats.first_symbol,
            values: fnn_infer(model, &feats.rows)?,
        })
    }
}

/// Closed set of equalizers, used for dispatch and serialization.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyEqualizer {
    Esn(EsnEqualizer),
    Ffe(FfeEqualizer),
    Fnn(FnnEqualizer),
}

impl AnyEqualizer {
    fn inner(&mut self) -> &mut dyn Equalizer {
        match self {
            AnyEqualizer::Esn(e) => e,
            AnyEqualizer::Ffe(e) => e,
            AnyEqualizer::Fnn(e) => e,
        }
    }

    /// Serialize a trained equalizer to an EQLZ blob.
    pub fn to_blob(&self) -> Result<Vec<u8>> {
        blob::encode(self)
    }

    pub fn from_blob(bytes: &[u8]) -> Result<Self> {
        blob::decode(bytes)
    }
}

impl Equalizer for AnyEqualizer {
    fn name(&self) -> &'static str {
        match self {
            AnyEqualizer::Esn(e) => e.name(),
            AnyEqualizer::Ffe(e) => e.name(),
            AnyEqualizer::Fnn(e) => e.name(),
        }
    }

    fn train(&mut self, rx: &DetectedChannels, sps: usize, known: &[f64]) -> Result<TrainReport> {
        self.inner().train(rx, sps, known)
    }

    fn equalize(&mut self, rx: &DetectedChannels, sps: usize) -> Result<SoftSymbols> {
        self.inner().equalize(rx, sps)
    }
}
