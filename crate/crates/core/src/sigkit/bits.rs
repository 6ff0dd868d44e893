use rand::RngCore;

use crate::error::{invalid, Result};
use crate::rng;

/// Transmitted binary data, regenerable from `seed` and its length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitSequence {
    pub bits: Vec<u8>,
    pub seed: u64,
}

impl BitSequence {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.bits.iter().map(|&b| b as f64).sum::<f64>() / self.bits.len() as f64
    }
}

/// `n` i.i.d. uniform bits drawn from a ChaCha8 stream seeded with `seed`.
pub fn generate_bits(n: usize, seed: u64) -> Result<BitSequence> {
    if n == 0 {
        return invalid("bit count must be at least 1");
    }
    let mut rng = rng::rng(seed);
    let mut bits = Vec::with_capacity(n);
    while bits.len() < n {
        let word = rng.next_u64();
        let take = (n - bits.len()).min(64);
        bits.extend((0..take).map(|i| ((word >> i) & 1) as u8));
    }
    Ok(BitSequence { bits, seed })
}

/// OOK amplitude mapping of a bit sequence: bit 0 -> 0.0, bit 1 -> 1.0.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSequence(pub Vec<f64>);

impl SymbolSequence {
    pub fn ook(bits: &BitSequence) -> Self {
        Self(bits.bits.iter().map(|&b| b as f64).collect())
    }

    /// Bipolar view {0,1} -> {-1,+1}, used for drive signals and training targets.
    pub fn bipolar(&self) -> Vec<f64> {
        self.0.iter().map(|&s| 2.0 * s - 1.0).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
