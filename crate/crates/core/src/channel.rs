//! Optical transmitter (quadrature-biased MZM), dispersive fiber and
//! lumped EDFA noise loading at a target OSNR.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rng;
use crate::sigkit::{fft_frequencies, freq_filter, spectrum, ComplexWaveform};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// OSNR is referenced to 0.1 nm at 1550 nm.
pub const OSNR_REFERENCE_BANDWIDTH_HZ: f64 = 12.5e9;

/// Half-width of the band counted as carrier when measuring CSPR.
pub const CSPR_CARRIER_HALFWIDTH_HZ: f64 = 150e6;

/// Standard single-mode fiber description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FiberParams {
    pub length_km: f64,
    /// D in ps/(nm km).
    pub dispersion_ps_nm_km: f64,
    pub loss_db_per_km: f64,
    pub ref_wavelength_nm: f64,
}

impl Default for FiberParams {
    fn default() -> Self {
        Self {
            length_km: 0.0,
            dispersion_ps_nm_km: 17.0,
            loss_db_per_km: 0.2,
            ref_wavelength_nm: 1550.0,
        }
    }
}

impl FiberParams {
    pub fn with_length(length_km: f64) -> Self {
        Self {
            length_km,
            ..Self::default()
        }
    }

    /// beta2 = -D lambda^2 / (2 pi c), in s^2/m.
    pub fn beta2(&self) -> f64 {
        let d = self.dispersion_ps_nm_km * 1e-6; // s/m^2
        let lambda = self.ref_wavelength_nm * 1e-9;
        -d * lambda * lambda / (2.0 * PI * SPEED_OF_LIGHT)
    }

    /// Accumulated dispersion phase 2 pi^2 beta2 L f^2 at baseband offset `f`.
    pub fn dispersion_phase(&self, f: f64) -> f64 {
        2.0 * PI * PI * self.beta2() * self.length_km * 1e3 * f * f
    }

    /// First zero of the small-signal IM-DD power-fading response,
    /// sqrt(c / (2 lambda^2 D L)). `None` without accumulated dispersion.
    pub fn first_fading_notch_hz(&self) -> Option<f64> {
        let d = self.dispersion_ps_nm_km.abs() * 1e-6;
        let l = self.length_km * 1e3;
        if d * l == 0.0 {
            return None;
        }
        let lambda = self.ref_wavelength_nm * 1e-9;
        Some((SPEED_OF_LIGHT / (2.0 * lambda * lambda * d * l)).sqrt())
    }

    fn validate(&self) -> Result<()> {
        if !(self.length_km >= 0.0 && self.length_km.is_finite()) {
            return invalid(format!(
                "fiber length must be >= 0 km, got {}",
                self.length_km
            ));
        }
        if !(self.loss_db_per_km >= 0.0) {
            return invalid("fiber loss must be >= 0 dB/km");
        }
        if !(self.ref_wavelength_nm > 0.0) || !self.dispersion_ps_nm_km.is_finite() {
            return invalid("fiber wavelength must be positive and dispersion finite");
        }
        Ok(())
    }
}

/// Chromatic dispersion followed by span loss.
///
/// The all-pass response is H(f) = exp(+j 2 pi^2 beta2 L f^2) with `f` the
/// offset from the optical carrier. The field is then scaled by
/// 10^(-loss L / 20).
pub fn propagate(w: &ComplexWaveform, fiber: &FiberParams) -> Result<ComplexWaveform> {
    fiber.validate()?;
    if fiber.length_km == 0.0 {
        return Ok(w.clone());
    }
    let gain = 10f64.powf(-fiber.loss_db_per_km * fiber.length_km / 20.0);
    Ok(freq_filter(w, |f| {
        Complex64::from_polar(gain, fiber.dispersion_phase(f))
    }))
}

/// Mach-Zehnder modulator biased at quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MzmParams {
    /// Fraction of the full quadrature-to-extinction swing used by a drive of +-1.
    pub mod_index: f64,
}

impl MzmParams {
    pub const QUADRATURE_BIAS: f64 = FRAC_PI_4;
}

impl Default for MzmParams {
    fn default() -> Self {
        Self { mod_index: 0.5 }
    }
}

#[derive(Debug, Clone)]
pub struct MzmOutput {
    pub field: ComplexWaveform,
    /// Drive samples whose magnitude exceeded 1 and were clipped.
    pub clipped: usize,
}

/// Field envelope E(t) = cos(pi/4 + (pi/4) m d(t)) for a real drive d
/// normalized to [-1, 1]. Out-of-range samples are clipped and counted.
pub fn mzm_modulate(drive: &ComplexWaveform, p: &MzmParams) -> Result<MzmOutput> {
    if !(p.mod_index > 0.0 && p.mod_index <= 1.0) {
        return invalid(format!("mod_index must lie in (0, 1], got {}", p.mod_index));
    }
    let mut clipped = 0;
    let field = drive
        .samples()
        .iter()
        .map(|z| {
            let mut d = z.re;
            if d.abs() > 1.0 {
                clipped += 1;
                d = d.clamp(-1.0, 1.0);
            }
            let e = (MzmParams::QUADRATURE_BIAS + FRAC_PI_4 * p.mod_index * d).cos();
            Complex64::new(e, 0.0)
        })
        .collect();
    Ok(MzmOutput {
        field: ComplexWaveform::new(field, drive.sample_rate())?,
        clipped,
    })
}

/// Scale a shaped drive so that `backoff` times its RMS maps to full scale
/// (+-1). Overshoot beyond full scale is left for the modulator to clip.
pub fn normalize_drive(shaped: &ComplexWaveform, backoff: f64) -> Result<ComplexWaveform> {
    if !(backoff > 0.0) {
        return invalid(format!("drive backoff must be > 0, got {backoff}"));
    }
    let rms = shaped.samples().iter().map(|z| z.re * z.re).sum::<f64>() / shaped.len() as f64;
    if !(rms > 0.0) {
        return invalid("cannot normalize an all-zero drive");
    }
    Ok(shaped.scaled(1.0 / (backoff * rms.sqrt())))
}

/// Carrier-to-signal power ratio in dB. Carrier power is everything within
/// +-`carrier_halfwidth_hz` of 0 Hz in the periodogram.
pub fn measure_cspr_db(field: &ComplexWaveform, carrier_halfwidth_hz: f64) -> f64 {
    let spec = spectrum(field);
    let freqs = fft_frequencies(field.len(), field.sample_rate());
    let (mut carrier, mut total) = (0.0, 0.0);
    for (z, f) in spec.iter().zip(freqs) {
        let p = z.norm_sqr();
        total += p;
        if f.abs() <= carrier_halfwidth_hz {
            carrier += p;
        }
    }
    10.0 * (carrier / (total - carrier)).log10()
}

/// Bisect the modulation index that yields `target_cspr_db` for `drive`.
/// CSPR falls monotonically as the index grows.
pub fn calibrate_mod_index(drive: &ComplexWaveform, target_cspr_db: f64) -> Result<f64> {
    let cspr = |m: f64| -> Result<f64> {
        let out = mzm_modulate(drive, &MzmParams { mod_index: m })?;
        Ok(measure_cspr_db(&out.field, CSPR_CARRIER_HALFWIDTH_HZ))
    };
    let (mut lo, mut hi) = (1e-4, 1.0);
    if cspr(hi)? > target_cspr_db {
        return invalid(format!(
            "CSPR of {target_cspr_db} dB is below what full modulation reaches"
        ));
    }
    if cspr(lo)? < target_cspr_db {
        return invalid(format!("CSPR of {target_cspr_db} dB is unreachably high"));
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let c = cspr(mid)?;
        if (c - target_cspr_db).abs() < 1e-3 {
            return Ok(mid);
        }
        if c > target_cspr_db {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Normalize to unit mean power and add circular complex white Gaussian
/// noise whose power within 12.5 GHz is `1 / 10^(osnr/10)`. An infinite
/// OSNR disables the noise.
pub fn amplify_to_osnr(w: &ComplexWaveform, osnr_db: f64, seed: u64) -> Result<ComplexWaveform> {
    let p = w.power();
    if !(p > 0.0) {
        return invalid("cannot amplify a zero-power signal");
    }
    if osnr_db.is_nan() {
        return invalid("OSNR must not be NaN");
    }
    let normalized = w.scaled(1.0 / p.sqrt());
    if osnr_db == f64::INFINITY {
        return Ok(normalized);
    }
    let noise_psd = 1.0 / (OSNR_REFERENCE_BANDWIDTH_HZ * 10f64.powf(osnr_db / 10.0));
    let sigma = (noise_psd * w.sample_rate() / 2.0).sqrt();
    let mut rng = rng::rng(seed);
    let samples = normalized
        .samples()
        .iter()
        .map(|z| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            z + Complex64::new(re * sigma, im * sigma)
        })
        .collect();
    ComplexWaveform::new(samples, w.sample_rate())
}
