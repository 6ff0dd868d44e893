//! Train, equalize and score one simulated measurement.

use crate::equalizers::{AnyEqualizer, Equalizer, TrainReport};
use crate::error::{invalid, Result};
use crate::metrics::{count_ber, hard_decide, BerResult};

use super::link::LinkOutput;

/// Outcome of equalizing one measurement.
#[derive(Debug, Clone)]
pub struct Scored {
    pub ber: BerResult,
    pub train: TrainReport,
}

/// Train `eq` on the first `n_train` symbols and count bit errors over the
/// remaining symbols the equalizer produced output for. The decision
/// threshold comes from training-prefix outputs after `washout_samples`.
pub fn score(
    link: &LinkOutput,
    eq: &mut AnyEqualizer,
    sps: usize,
    n_train: usize,
    washout_samples: usize,
) -> Result<Scored> {
    let n = link.symbols.len();
    if n_train == 0 || n_train >= n {
        return invalid(format!(
            "training prefix {n_train} must lie inside the {n} symbols"
        ));
    }
    let train = eq.train(&link.rx, sps, &link.symbols[..n_train])?;
    let soft = eq.equalize(&link.rx, sps)?;
    let first = soft.first_symbol.max(washout_samples.div_ceil(sps));
    if first >= n_train {
        return invalid("no equalizer output inside the training prefix");
    }
    let train_soft: Vec<f64> = (first..n_train).filter_map(|i| soft.get(i)).collect();
    let train_bits = &link.bits.bits[first..first + train_soft.len()];
    let end = soft.end().min(n);
    if end <= n_train {
        return invalid("no equalizer output after the training prefix");
    }
    let test_soft: Vec<f64> = (n_train..end).filter_map(|i| soft.get(i)).collect();
    let decisions = hard_decide(&test_soft, &train_soft, train_bits)?;
    let ber = count_ber(&decisions, &link.bits.bits[n_train..end], 0)?;
    Ok(Scored { ber, train })
}
