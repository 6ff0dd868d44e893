//! Hard decisions, bit-error counting with Wilson intervals, and the KP4
//! threshold test.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Pre-FEC BER below which KP4 hard-decision FEC yields error-free output.
pub const KP4_BER_THRESHOLD: f64 = 2.24e-4;
/// Two-sided 95% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerResult {
    pub errors: u64,
    pub bits: u64,
    pub ber: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub below_kp4: bool,
}

impl BerResult {
    pub fn from_counts(errors: u64, bits: u64) -> Result<Self> {
        if bits == 0 {
            return invalid("BER needs at least one counted bit");
        }
        if errors > bits {
            return invalid("more errors than bits");
        }
        let ber = errors as f64 / bits as f64;
        let (ci95_low, ci95_high) = wilson_interval(errors, bits, Z_95);
        Ok(Self {
            errors,
            bits,
            ber,
            ci95_low,
            ci95_high,
            below_kp4: ber < KP4_BER_THRESHOLD,
        })
    }
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    (
        (centre - half).max(0.0).min(p),
        (centre + half).min(1.0).max(p),
    )
}

/// Bit decisions against the midpoint of the class-conditional means of
/// `training_soft`, whose true bits are `training_bits`.
pub fn hard_decide(soft: &[f64], training_soft: &[f64], training_bits: &[u8]) -> Result<Vec<u8>> {
    if training_soft.len() != training_bits.len() {
        return invalid("training soft values and bits differ in length");
    }
    let (mut s0, mut n0, mut s1, mut n1) = (0.0, 0usize, 0.0, 0usize);
    for (&v, &b) in training_soft.iter().zip(training_bits) {
        if b == 0 {
            s0 += v;
            n0 += 1;
        } else {
            s1 += v;
            n1 += 1;
        }
    }
    if n0 == 0 || n1 == 0 {
        return invalid("threshold estimation needs both bit values in the training data");
    }
    let (m0, m1) = (s0 / n0 as f64, s1 / n1 as f64);
    let threshold = 0.5 * (m0 + m1);
    let inverted = m1 < m0;
    Ok(soft
        .iter()
        .map(|&v| ((v > threshold) != inverted) as u8)
        .collect())
}

/// Count disagreements after discarding the first `skip` positions.
pub fn count_ber(decisions: &[u8], truth: &[u8], skip: usize) -> Result<BerResult> {
    if decisions.len() != truth.len() {
        return invalid(format!(
            "decision length {} differs from reference length {}",
            decisions.len(),
            truth.len()
        ));
    }
    if skip >= truth.len() {
        return invalid("nothing left to count after the skipped prefix");
    }
    let errors = decisions[skip..]
        .iter()
        .zip(&truth[skip..])
        .filter(|(a, b)| (**a != 0) != (**b != 0))
        .count();
    BerResult::from_counts(errors as u64, (truth.len() - skip) as u64)
}
