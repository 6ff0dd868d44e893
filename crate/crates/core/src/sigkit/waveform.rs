use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Uniformly sampled complex baseband signal (optical field or electrical).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexWaveform {
    samples: Vec<Complex64>,
    sample_rate: f64,
}

impl ComplexWaveform {
    pub fn new(samples: Vec<Complex64>, sample_rate: f64) -> Result<Self> {
        if !(sample_rate > 0.0 && sample_rate.is_finite()) {
            return invalid(format!("sample rate must be positive, got {sample_rate}"));
        }
        if samples.is_empty() {
            return invalid("waveform must contain at least one sample");
        }
        if samples
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return invalid("waveform contains non-finite samples");
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn from_real(samples: &[f64], sample_rate: f64) -> Result<Self> {
        Self::new(
            samples.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            sample_rate,
        )
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn from_parts(samples: Vec<Complex64>, sample_rate: f64) -> Self {
        debug_assert!(sample_rate > 0.0 && !samples.is_empty());
        Self {
            samples,
            sample_rate,
        }
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sum of |x|^2 over all samples.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Mean of |x|^2.
    pub fn power(&self) -> f64 {
        self.energy() / self.samples.len() as f64
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.re).collect()
    }

    pub fn scaled(&self, gain: f64) -> Self {
        Self::from_parts(
            self.samples.iter().map(|z| z * gain).collect(),
            self.sample_rate,
        )
    }
}

/// Uniformly sampled real signal (detected photocurrent, ADC output).
#[derive(Debug, Clone, PartialEq)]
pub struct RealWaveform {
    pub samples: Vec<f64>,
    pub sample_rate: f64,
}

impl RealWaveform {
    pub fn new(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if !(sample_rate > 0.0 && sample_rate.is_finite()) {
            return invalid(format!("sample rate must be positive, got {sample_rate}"));
        }
        if samples.is_empty() {
            return invalid("waveform must contain at least one sample");
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return invalid("waveform contains non-finite samples");
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn to_complex(&self) -> ComplexWaveform {
        ComplexWaveform::from_parts(
            self.samples
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect(),
            self.sample_rate,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_inputs() {
        assert!(ComplexWaveform::new(vec![], 1.0).is_err());
        assert!(ComplexWaveform::new(vec![Complex64::new(1.0, 0.0)], 0.0).is_err());
        assert!(ComplexWaveform::new(vec![Complex64::new(f64::NAN, 0.0)], 1.0).is_err());
        assert!(RealWaveform::new(vec![f64::INFINITY], 1.0).is_err());
        assert!(RealWaveform::new(vec![1.0], -2.0).is_err());
    }

    #[test]
    fn energy_and_power() {
        let w = ComplexWaveform::from_real(&[1.0, -1.0, 2.0, 0.0], 4.0).unwrap();
        assert_eq!(w.energy(), 6.0);
        assert_eq!(w.power(), 1.5);
    }
}
