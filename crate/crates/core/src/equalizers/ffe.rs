//! Fractionally spaced (T/2) feed-forward equalizer adapted by LMS.

use serde::{Deserialize, Serialize};

use super::TrainReport;
use crate::error::{invalid, Error, Result};

/// Samples per symbol the FFE runs at.
pub const FFE_SPS: usize = 2;
pub const DEFAULT_FFE_TAPS: usize = 32;
/// Updates per divergence-check window.
const DIVERGENCE_WINDOW: usize = 256;
const DIVERGENCE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FfeParams {
    /// Taps per input channel.
    pub n_taps: usize,
    pub step_size: f64,
    /// Passes of LMS over the training prefix.
    pub train_passes: usize,
    /// μ-halving retries after a divergence.
    pub max_retries: usize,
}

impl Default for FfeParams {
    fn default() -> Self {
        Self {
            n_taps: DEFAULT_FFE_TAPS,
            step_size: 1e-3,
            train_passes: 1,
            max_retries: 3,
        }
    }
}

impl FfeParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_taps == 0 {
            return invalid("FFE needs at least one tap");
        }
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return invalid("LMS step size must be positive");
        }
        if self.train_passes == 0 {
            return invalid("train_passes must be at least 1");
        }
        Ok(())
    }
}

/// Trained tap set, one row of `n_taps` coefficients per channel.
#[derive(Debug, Clone, PartialEq)]
pub struct FfeState {
    pub taps: Vec<Vec<f64>>,
    /// Step size actually used (after any halving).
    pub step_size: f64,
    pub sps: usize,
}

impl FfeState {
    pub fn n_taps(&self) -> usize {
        self.taps.first().map_or(0, |t| t.len())
    }

    /// Output for symbol `n`: tap `n_taps/2` multiplies sample `2n`.
    pub fn output(&self, rx: &[Vec<f64>], n: usize) -> f64 {
        let t = self.n_taps();
        let centre = n * FFE_SPS;
        let mut y = 0.0;
        for (w, x) in self.taps.iter().zip(rx) {
            let (lo, j0) = window_start(centre, t);
            let hi = (lo + t - j0).min(x.len());
            for (k, s) in (lo..hi).enumerate() {
                y += w[j0 + k] * x[s];
            }
        }
        y
    }

    /// Apply frozen taps to every symbol instant inside the stream.
    pub fn apply(&self, rx: &[Vec<f64>]) -> Vec<f64> {
        let len = rx.first().map_or(0, |c| c.len());
        let n = len.div_ceil(FFE_SPS);
        (0..n).map(|i| self.output(rx, i)).collect()
    }

    fn update(&mut self, rx: &[Vec<f64>], n: usize, mu_e: f64) {
        let t = self.n_taps();
        let centre = n * FFE_SPS;
        for (w, x) in self.taps.iter_mut().zip(rx) {
            let (lo, j0) = window_start(centre, t);
            let hi = (lo + t - j0).min(x.len());
            for (k, s) in (lo..hi).enumerate() {
                w[j0 + k] += mu_e * x[s];
            }
        }
    }
}

/// First in-range sample of the window around `centre` and the tap it meets.
#[inline]
fn window_start(centre: usize, taps: usize) -> (usize, usize) {
    let half = taps / 2;
    if centre >= half {
        (centre - half, 0)
    } else {
        (0, half - centre)
    }
}

/// Train on `targets` (symbols `0..targets.len()`) by LMS, once per symbol,
/// then freeze and equalize the whole stream. `rx` holds one `Vec` per
/// channel at 2 samples per symbol.
pub fn ffe_train_apply(
    rx: &[Vec<f64>],
    targets: &[f64],
    p: &FfeParams,
) -> Result<(Vec<f64>, FfeState, TrainReport)> {
    let state = ffe_train(rx, targets, p)?;
    let (state, report) = state;
    let out = state.apply(rx);
    Ok((out, state, report))
}

pub fn ffe_train(
    rx: &[Vec<f64>],
    targets: &[f64],
    p: &FfeParams,
) -> Result<(FfeState, TrainReport)> {
    p.validate()?;
    if rx.is_empty() {
        return invalid("FFE needs at least one channel");
    }
    let len = rx[0].len();
    if rx.iter().any(|c| c.len() != len) {
        return invalid("FFE channels differ in length");
    }
    let n_train = targets.len().min(len.div_ceil(FFE_SPS));
    if n_train == 0 {
        return invalid("FFE training needs at least one known symbol");
    }
    let mut mu = p.step_size;
    for attempt in 0..=p.max_retries {
        match lms(rx, &targets[..n_train], p, mu) {
            Some(state) => {
                let mse = (0..n_train)
                    .map(|n| (targets[n] - state.output(rx, n)).powi(2))
                    .sum::<f64>()
                    / n_train as f64;
                let report = TrainReport {
                    train_mse: mse,
                    n_train_samples: n_train,
                    converged: true,
                    iterations: n_train * p.train_passes * (attempt + 1),
                    min_norm_fallback: false,
                };
                return Ok((state, report));
            }
            None => mu /= 2.0,
        }
    }
    Err(Error::TrainingDiverged(format!(
        "LMS diverged with step size halved {} times from {}",
        p.max_retries, p.step_size
    )))
}

/// One LMS run from a zero tap vector. `None` on divergence.
fn lms(rx: &[Vec<f64>], targets: &[f64], p: &FfeParams, mu: f64) -> Option<FfeState> {
    let mut state = FfeState {
        taps: vec![vec![0.0; p.n_taps]; rx.len()],
        step_size: mu,
        sps: FFE_SPS,
    };
    let mut baseline: Option<f64> = None;
    let mut acc = 0.0;
    let mut count = 0;
    for _ in 0..p.train_passes {
        for (n, &t) in targets.iter().enumerate() {
            let e = t - state.output(rx, n);
            if !e.is_finite() {
                return None;
            }
            state.update(rx, n, mu * e);
            acc += e * e;
            count += 1;
            if count == DIVERGENCE_WINDOW {
                let mse = acc / count as f64;
                match baseline {
                    None => baseline = Some(mse),
                    Some(b) if mse > DIVERGENCE_FACTOR * b => return None,
                    _ => {}
                }
                acc = 0.0;
                count = 0;
            }
        }
    }
    Some(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    /// Symbols `x[2n]` on a white ±1 chip stream at 2 sps, filtered by `h`
    /// and perturbed by white noise of variance `s2`.
    fn toy(h: &[f64], s2: f64, n_sym: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let chips: Vec<f64> = (0..n_sym * 2)
            .map(|_| if r.random_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        let noise = Normal::new(0.0, s2.sqrt()).unwrap();
        let rx = (0..chips.len())
            .map(|m| {
                let mut v: f64 = noise.sample(&mut r);
                for (k, hk) in h.iter().enumerate() {
                    if m >= k {
                        v += hk * chips[m - k];
                    }
                }
                v
            })
            .collect();
        let sym = (0..n_sym).map(|n| chips[2 * n]).collect();
        (rx, sym)
    }

    /// Closed-form Wiener filter for the toy model: returns (R, p).
    fn toy_statistics(h: &[f64], s2: f64, taps: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
        let half = taps as isize / 2;
        let acf = |lag: usize| -> f64 {
            let mut a: f64 = (0..h.len())
                .filter(|k| k + lag < h.len())
                .map(|k| h[k] * h[k + lag])
                .sum();
            if lag == 0 {
                a += s2;
            }
            a
        };
        let r = (0..taps)
            .map(|i| (0..taps).map(|j| acf(i.abs_diff(j))).collect())
            .collect();
        // E[r[2n + j − half] x[2n]] = h[j − half] when that index is valid.
        let p = (0..taps as isize)
            .map(|j| {
                let k = j - half;
                if k >= 0 && (k as usize) < h.len() {
                    h[k as usize]
                } else {
                    0.0
                }
            })
            .collect();
        (r, p)
    }

    fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for c in 0..n {
            let piv = (c..n)
                .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
                .unwrap();
            a.swap(c, piv);
            b.swap(c, piv);
            for r in c + 1..n {
                let f = a[r][c] / a[c][c];
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
                b[r] -= f * b[c];
            }
        }
        let mut x = vec![0.0; n];
        for r in (0..n).rev() {
            let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
            x[r] = (b[r] - s) / a[r][r];
        }
        x
    }

    /// J(w) = 1 − 2pᵀw + wᵀRw for unit-power targets.
    fn mse_of(w: &[f64], r: &[Vec<f64>], p: &[f64]) -> f64 {
        let rw: Vec<f64> = r
            .iter()
            .map(|row| row.iter().zip(w).map(|(a, b)| a * b).sum())
            .collect();
        1.0 - 2.0 * p.iter().zip(w).map(|(a, b)| a * b).sum::<f64>()
            + w.iter().zip(&rw).map(|(a, b)| a * b).sum::<f64>()
    }

    #[test]
    fn identity_channel_gives_unit_centre_tap() {
        let (rx, sym) = toy(&[1.0], 0.0, 5000, 1);
        let p = FfeParams {
            step_size: 5e-3,
            ..FfeParams::default()
        };
        let (out, st, rep) = ffe_train_apply(&[rx], &sym[..2000], &p).unwrap();
        assert_eq!(st.n_taps(), 32);
        assert!((st.taps[0][16] - 1.0).abs() < 1e-3, "{}", st.taps[0][16]);
        assert!(rep.train_mse < 1e-6);
        let errors = out
            .iter()
            .zip(&sym)
            .filter(|(y, s)| y.signum() != s.signum())
            .count();
        assert_eq!(errors, 0);
    }

    #[test]
    fn lms_mse_near_wiener_mmse() {
        let h = [1.0, 0.5];
        let s2 = 0.01;
        let (r, pv) = toy_statistics(&h, s2, 32);
        let w_opt = solve(r.clone(), pv.clone());
        let j_min = mse_of(&w_opt, &r, &pv);
        let (rx, sym) = toy(&h, s2, 200_000, 2);
        let p = FfeParams {
            step_size: 1e-4,
            ..FfeParams::default()
        };
        let (st, _) = ffe_train(&[rx], &sym, &p).unwrap();
        let j = mse_of(&st.taps[0], &r, &pv);
        assert!(j >= j_min - 1e-12);
        assert!((j - j_min) / j_min < 0.01, "J = {j}, Jmin = {j_min}");
    }

    #[test]
    fn lms_mean_taps_converge_to_wiener() {
        let h = [1.0, 0.2];
        let s2 = 0.01;
        let (r, pv) = toy_statistics(&h, s2, 32);
        let w_opt = solve(r, pv);
        // Average taps over independent realisations to isolate the mean.
        let runs = 20;
        let mut mean = vec![0.0; 32];
        for seed in 0..runs {
            let (rx, sym) = toy(&h, s2, 10_000, 100 + seed);
            let p = FfeParams {
                step_size: 1e-3,
                ..FfeParams::default()
            };
            let (st, _) = ffe_train(&[rx], &sym, &p).unwrap();
            for (m, w) in mean.iter_mut().zip(&st.taps[0]) {
                *m += w / runs as f64;
            }
        }
        let err: f64 = mean
            .iter()
            .zip(&w_opt)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let norm: f64 = w_opt.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(err / norm < 0.01, "relative tap error {}", err / norm);
    }

    #[test]
    fn divergence_halves_step_then_fails() {
        let (rx, sym) = toy(&[1.0, 0.5], 0.01, 4000, 3);
        // μ·trace(R) far above 2 diverges; three halvings are not enough.
        let p = FfeParams {
            step_size: 2.0,
            ..FfeParams::default()
        };
        assert!(matches!(
            ffe_train(std::slice::from_ref(&rx), &sym, &p),
            Err(Error::TrainingDiverged(_))
        ));
        // Starting just above the stability edge, halving recovers.
        let p = FfeParams {
            step_size: 0.2,
            ..FfeParams::default()
        };
        let (st, rep) = ffe_train(&[rx], &sym, &p).unwrap();
        assert!(st.step_size < 0.2);
        assert!(rep.converged);
    }

    #[test]
    fn multi_channel_taps() {
        let (a, sym) = toy(&[1.0], 0.0, 3000, 4);
        let b: Vec<f64> = a.iter().map(|v| -v).collect();
        let p = FfeParams {
            step_size: 5e-3,
            ..FfeParams::default()
        };
        let (out, st, _) = ffe_train_apply(&[a, b], &sym[..1500], &p).unwrap();
        assert_eq!(st.taps.len(), 2);
        let d = st.taps[0][16] - st.taps[1][16];
        assert!((d - 1.0).abs() < 1e-3, "{d}");
        assert!(out.iter().zip(&sym).all(|(y, s)| y.signum() == s.signum()));
    }

    #[test]
    fn rejects_bad_params() {
        let bad = FfeParams {
            step_size: 0.0,
            ..FfeParams::default()
        };
        assert!(ffe_train(&[vec![0.0; 10]], &[1.0], &bad).is_err());
        assert!(ffe_train(&[vec![0.0; 10]], &[], &FfeParams::default()).is_err());
    }
}
