//! Receiver front end: WSS spectral slicing, square-law photodiodes with a
//! Bessel electrical response, the sampling scope, and coarse alignment to
//! the transmitted sequence.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sigkit::{fft, freq_filter_real, ifft, resample_real, ComplexWaveform, RealWaveform};

/// One optical bandpass of the WSS with a super-Gaussian power transmission.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceSpec {
    /// Center offset from the optical carrier, GHz.
    #[serde(rename = "center_ghz")]
    pub center_ghz: f64,
    /// Full width at which the power transmission falls to exp(-1/2), GHz.
    #[serde(rename = "bw_ghz")]
    pub bandwidth_ghz: f64,
    /// Super-Gaussian order; 1 is Gaussian, large values approach a brick wall.
    pub order: u32,
}

impl SliceSpec {
    pub fn new(center_ghz: f64, bandwidth_ghz: f64, order: u32) -> Result<Self> {
        let s = Self {
            center_ghz,
            bandwidth_ghz,
            order,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if !(self.bandwidth_ghz > 0.0 && self.bandwidth_ghz.is_finite()) {
            return invalid(format!(
                "slice bandwidth must be > 0, got {}",
                self.bandwidth_ghz
            ));
        }
        if !self.center_ghz.is_finite() {
            return invalid("slice center must be finite");
        }
        if self.order < 1 {
            return invalid("super-Gaussian order must be >= 1");
        }
        Ok(())
    }

    /// Power transmission exp(-1/2 ((f - fc) / (BW/2))^(2 order)) at `f_hz`.
    pub fn transmission(&self, f_hz: f64) -> f64 {
        let x = (f_hz - self.center_ghz * 1e9) / (self.bandwidth_ghz * 0.5e9);
        (-0.5 * x.abs().powf(2.0 * self.order as f64)).exp()
    }

    /// Field (amplitude) response, the square root of [`Self::transmission`].
    pub fn response(&self, f_hz: f64) -> f64 {
        self.transmission(f_hz).sqrt()
    }
}

/// Ordered set of 1 to 4 slices, numbered 1.. from low to high frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<SliceSpec>", into = "Vec<SliceSpec>")]
pub struct SliceBank {
    slices: Vec<SliceSpec>,
}

impl TryFrom<Vec<SliceSpec>> for SliceBank {
    type Error = Error;

    fn try_from(slices: Vec<SliceSpec>) -> Result<Self> {
        SliceBank::new(slices)
    }
}

impl From<SliceBank> for Vec<SliceSpec> {
    fn from(b: SliceBank) -> Self {
        b.slices
    }
}

pub const MAX_SLICES: usize = 4;

impl SliceBank {
    pub fn new(slices: Vec<SliceSpec>) -> Result<Self> {
        if slices.is_empty() || slices.len() > MAX_SLICES {
            return invalid(format!(
                "a slice bank holds 1 to {MAX_SLICES} slices, got {}",
                slices.len()
            ));
        }
        for s in &slices {
            s.validate()?;
        }
        for pair in slices.windows(2) {
            if !(pair[0].center_ghz < pair[1].center_ghz) {
                return invalid("slice centers must be distinct and ascending");
            }
        }
        Ok(Self { slices })
    }

    /// Four contiguous 8.8 GHz slices tiling +-17.6 GHz, order 4. The
    /// carrier sits on the edge shared by slices 2 and 3.
    pub fn contiguous_four() -> Self {
        Self::four_at(8.8)
    }

    /// The contiguous centres with doubled 17.6 GHz widths. Slices 2 and 3
    /// each contain the carrier and one sideband out to 13.2 GHz; slices 1
    /// and 4 hold the outer sidebands without carrier.
    pub fn overlapping_four() -> Self {
        Self::four_at(17.6)
    }

    fn four_at(bandwidth_ghz: f64) -> Self {
        Self::new(
            [-13.2, -4.4, 4.4, 13.2]
                .iter()
                .map(|&c| SliceSpec {
                    center_ghz: c,
                    bandwidth_ghz,
                    order: 4,
                })
                .collect(),
        )
        .expect("four-slice bank is valid")
    }

    /// Single wide passband for the one-photodiode receiver.
    pub fn broadband(bandwidth_ghz: f64, order: u32) -> Result<Self> {
        Self::new(vec![SliceSpec::new(0.0, bandwidth_ghz, order)?])
    }

    /// Sub-bank by 1-based slice indices.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if idx.len() != indices.len() {
            return invalid("slice subset repeats an index");
        }
        let mut out = Vec::with_capacity(idx.len());
        for i in idx {
            match self.slices.get(i.wrapping_sub(1)) {
                Some(s) => out.push(*s),
                None => {
                    return invalid(format!("slice index {i} outside 1..={}", self.slices.len()))
                }
            }
        }
        Self::new(out)
    }

    pub fn slices(&self) -> &[SliceSpec] {
        &self.slices
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }
}

/// Filter `w` through every slice of `bank`; outputs stay time-aligned
/// with the input (the responses are real and even about each center).
pub fn wss_apply(w: &ComplexWaveform, bank: &SliceBank) -> Result<Vec<ComplexWaveform>> {
    let nyquist = w.sample_rate() / 2.0;
    for s in bank.slices() {
        let edge = s.center_ghz.abs() * 1e9 + s.bandwidth_ghz * 0.5e9;
        if edge > nyquist * (1.0 + 1e-12) {
            return invalid(format!(
                "slice at {} GHz with {} GHz bandwidth exceeds the {} GHz Nyquist band",
                s.center_ghz,
                s.bandwidth_ghz,
                nyquist / 1e9
            ));
        }
    }
    let mut spec = w.samples().to_vec();
    fft(&mut spec);
    let freqs = crate::sigkit::fft_frequencies(w.len(), w.sample_rate());
    let outs = bank
        .slices()
        .iter()
        .map(|s| {
            let mut buf: Vec<Complex64> = spec
                .iter()
                .zip(&freqs)
                .map(|(z, &f)| z * s.response(f))
                .collect();
            ifft(&mut buf);
            ComplexWaveform::new(buf, w.sample_rate())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(outs)
}

/// Frequency at which the unit-delay 4th-order Bessel lowpass is 3 dB down.
pub const BESSEL4_W3DB: f64 = 2.113_917_674_904_216;

/// 4th-order Bessel (maximally-flat delay) lowpass with its DC group delay
/// removed, so the output stays time-aligned with the input.
pub fn bessel4_response(f_hz: f64, cutoff_hz: f64) -> Complex64 {
    let w = f_hz / cutoff_hz * BESSEL4_W3DB;
    let s = Complex64::new(0.0, w);
    let s2 = s * s;
    let den = s2 * s2 + s2 * s * 10.0 + s2 * 45.0 + s * 105.0 + 105.0;
    Complex64::new(105.0, 0.0) / den * Complex64::from_polar(1.0, w)
}

/// Square-law detection followed by the photodiode's electrical response.
pub fn photodetect(
    field: &ComplexWaveform,
    pd_bandwidth_ghz: f64,
    responsivity: f64,
) -> Result<RealWaveform> {
    if !(pd_bandwidth_ghz > 0.0) {
        return invalid(format!(
            "photodiode bandwidth must be > 0, got {pd_bandwidth_ghz}"
        ));
    }
    let current: Vec<f64> = field
        .samples()
        .iter()
        .map(|z| responsivity * z.norm_sqr())
        .collect();
    let raw = RealWaveform::new(current, field.sample_rate())?;
    let cutoff = pd_bandwidth_ghz * 1e9;
    Ok(freq_filter_real(&raw, |f| bessel4_response(f, cutoff)))
}

/// Sampling scope model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdcParams {
    pub analog_bandwidth_ghz: f64,
    /// Converter rate; `None` keeps the simulation rate.
    pub sample_rate_gsps: Option<f64>,
    /// Uniform quantizer resolution; `None` disables quantization.
    pub enob_bits: Option<f64>,
}

impl Default for AdcParams {
    fn default() -> Self {
        Self {
            analog_bandwidth_ghz: 33.0,
            sample_rate_gsps: None,
            enob_bits: None,
        }
    }
}

/// Brick-wall analog bandwidth, resampling to `out_rate`, optional
/// quantization, then resampling to the DSP rate.
pub fn adc(
    ch: &RealWaveform,
    analog_bandwidth_ghz: f64,
    out_rate: f64,
    dsp_rate: f64,
    enob_bits: Option<f64>,
) -> Result<RealWaveform> {
    if out_rate > ch.sample_rate * (1.0 + 1e-12) {
        return invalid(format!(
            "ADC rate {out_rate} exceeds the simulation rate {}",
            ch.sample_rate
        ));
    }
    if !(analog_bandwidth_ghz > 0.0) {
        return invalid("ADC bandwidth must be > 0");
    }
    let bw = analog_bandwidth_ghz * 1e9;
    let filtered = freq_filter_real(ch, |f| {
        Complex64::new(if f.abs() <= bw { 1.0 } else { 0.0 }, 0.0)
    });
    let mut sampled = resample_real(&filtered, out_rate)?;
    if let Some(bits) = enob_bits {
        quantize(&mut sampled.samples, bits)?;
    }
    resample_real(&sampled, dsp_rate)
}

fn quantize(x: &mut [f64], bits: f64) -> Result<()> {
    if !(bits >= 1.0) {
        return invalid(format!("ENOB must be >= 1, got {bits}"));
    }
    let lo = x.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        return Ok(());
    }
    let levels = 2f64.powf(bits) - 1.0;
    let step = (hi - lo) / levels;
    x.iter_mut()
        .for_each(|v| *v = lo + ((*v - lo) / step).round() * step);
    Ok(())
}

/// Real electrical channels, one per photodiode, on a common time base.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectedChannels {
    pub channels: Vec<Vec<f64>>,
    pub sample_rate: f64,
}

impl DetectedChannels {
    pub fn new(channels: Vec<Vec<f64>>, sample_rate: f64) -> Result<Self> {
        if channels.is_empty() {
            return invalid("at least one detected channel is required");
        }
        let len = channels[0].len();
        if len == 0 || channels.iter().any(|c| c.len() != len) {
            return invalid("detected channels must be non-empty and of equal length");
        }
        if channels.iter().flatten().any(|v| !v.is_finite()) {
            return invalid("detected channels contain non-finite values");
        }
        if !(sample_rate > 0.0) {
            return invalid("sample rate must be positive");
        }
        Ok(Self {
            channels,
            sample_rate,
        })
    }

    pub fn from_waveforms(ws: Vec<RealWaveform>) -> Result<Self> {
        let rate = ws.first().map(|w| w.sample_rate).unwrap_or(0.0);
        if ws.iter().any(|w| w.sample_rate != rate) {
            return invalid("detected channels must share one sample rate");
        }
        Self::new(ws.into_iter().map(|w| w.samples).collect(), rate)
    }

    pub fn n_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Samples of all channels at time index `i`.
    pub fn frame(&self, i: usize) -> impl Iterator<Item = f64> + '_ {
        self.channels.iter().map(move |c| c[i])
    }

    /// Keep only the listed channels (0-based).
    pub fn select(&self, idx: &[usize]) -> Result<Self> {
        let mut out = Vec::with_capacity(idx.len());
        for &i in idx {
            match self.channels.get(i) {
                Some(c) => out.push(c.clone()),
                None => return invalid(format!("channel {i} does not exist")),
            }
        }
        Self::new(out, self.sample_rate)
    }
}

fn standardized(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let sd = if var > 0.0 { var.sqrt() } else { 1.0 };
    x.iter().map(|v| (v - mean) / sd).collect()
}

/// Circular cross-correlation magnitude of `rx` against `pattern`;
/// returns (best lag in 0..len, peak / RMS sidelobe).
fn correlate(rx: &[f64], pattern: &[Complex64], guard: usize) -> (usize, f64) {
    let len = rx.len();
    let mut r: Vec<Complex64> = standardized(rx)
        .into_iter()
        .map(|v| Complex64::new(v, 0.0))
        .collect();
    fft(&mut r);
    for (a, p) in r.iter_mut().zip(pattern) {
        *a *= p.conj();
    }
    ifft(&mut r);
    let mag: Vec<f64> = r.iter().map(|z| z.re.abs()).collect();
    let (lag, peak) =
        mag.iter().enumerate().fold(
            (0, f64::MIN),
            |acc, (i, &m)| if m > acc.1 { (i, m) } else { acc },
        );
    let (mut sum, mut count) = (0.0, 0usize);
    for (i, &m) in mag.iter().enumerate() {
        let d = (i as isize - lag as isize).rem_euclid(len as isize) as usize;
        if d.min(len - d) > guard {
            sum += m * m;
            count += 1;
        }
    }
    let rms = if count > 0 {
        (sum / count as f64).sqrt()
    } else {
        0.0
    };
    let ratio = if rms > 0.0 {
        peak / rms
    } else if peak > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    (lag, ratio)
}

/// Integer-lag alignment of `rx` to the transmitted symbols.
///
/// The reference is the zero-stuffed (upsampled by `sps`) transmitted
/// pattern. Each channel is correlated against it and the channel with the
/// clearest peak sets the lag applied to all channels; with a single
/// photodiode that is channel 1. Lag `d` means `rx[n] ~ tx[n - d]`. The
/// aligned output is trimmed to `tx_symbols.len() * sps` samples.
pub fn synchronize(
    rx: &DetectedChannels,
    tx_symbols: &[f64],
    sps: usize,
) -> Result<(DetectedChannels, isize)> {
    let tx_len = tx_symbols.len() * sps;
    if sps == 0 || tx_symbols.is_empty() {
        return invalid("synchronization needs symbols and sps >= 1");
    }
    if rx.len() < tx_len {
        return invalid(format!(
            "received {} samples, need at least {tx_len}",
            rx.len()
        ));
    }
    let len = rx.len();
    let mean = tx_symbols.iter().sum::<f64>() / tx_symbols.len() as f64;
    let mut pattern = vec![Complex64::new(0.0, 0.0); len];
    for (n, &s) in tx_symbols.iter().enumerate() {
        pattern[n * sps] = Complex64::new(s - mean, 0.0);
    }
    fft(&mut pattern);

    let (lag, ratio) = rx
        .channels
        .iter()
        .map(|c| correlate(c, &pattern, 2 * sps))
        .fold(
            (0, f64::MIN),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        );
    if !(ratio >= 3.0) {
        return Err(Error::SyncFailure { ratio });
    }
    let aligned = rx
        .channels
        .iter()
        .map(|c| (0..tx_len).map(|n| c[(n + lag) % len]).collect())
        .collect();
    let signed = if lag > len / 2 {
        lag as isize - len as isize
    } else {
        lag as isize
    };
    Ok((DetectedChannels::new(aligned, rx.sample_rate)?, signed))
}

/// Convenience: slice, detect and digitize one received field.
pub fn detect_all(
    field: &ComplexWaveform,
    bank: &SliceBank,
    pd_bandwidth_ghz: f64,
    responsivity: f64,
    adc_params: &AdcParams,
    dsp_rate: f64,
) -> Result<DetectedChannels> {
    let out_rate = adc_params
        .sample_rate_gsps
        .map(|r| r * 1e9)
        .unwrap_or(field.sample_rate());
    let chans = wss_apply(field, bank)?
        .iter()
        .map(|s| {
            let pd = photodetect(s, pd_bandwidth_ghz, responsivity)?;
            adc(
                &pd,
                adc_params.analog_bandwidth_ghz,
                out_rate,
                dsp_rate,
                adc_params.enob_bits,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    DetectedChannels::from_waveforms(chans)
}
