//! Quick oracle checks run by the `selftest` subcommand. Each compares a
//! library result with a closed form or a direct evaluation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};

use crate::channel::{propagate, FiberParams, SPEED_OF_LIGHT};
use crate::equalizers::{esn_step, CsrMatrix, EsnModel};
use crate::metrics::{count_ber, wilson_interval, Z_95};
use crate::rng;
use crate::sigkit::{rrc_taps, ComplexWaveform};

use super::config::{EqualizerKind, EqualizerSpec, ExperimentConfig};
use super::link::Receiver;
use super::sweep::run_sweep;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

fn rrc_cascade() -> Check {
    let sps = 8;
    let rrc = rrc_taps(0.1, sps, 64).expect("valid RRC");
    let rc = rrc.convolve(&rrc);
    let c = rc.taps.len() / 2;
    let peak = rc.taps[c];
    let worst = (1..64)
        .flat_map(|k| [c - k * sps, c + k * sps])
        .map(|i| (rc.taps[i] / peak).abs())
        .fold(0.0, f64::max);
    check(
        "rrc_cascade_isi",
        worst < 1e-3,
        format!("worst ISI {worst:.2e} of peak"),
    )
}

fn dispersion_inverse() -> Check {
    let mut r = rng::rng(3);
    let x: Vec<Complex64> = (0..4096)
        .map(|_| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        .collect();
    let w = ComplexWaveform::new(x, 256e9).expect("finite samples");
    let fiber = |l: f64, d: f64| FiberParams {
        length_km: l,
        dispersion_ps_nm_km: d,
        loss_db_per_km: 0.0,
        ..FiberParams::default()
    };
    let rms = |a: &ComplexWaveform, b: &ComplexWaveform| {
        let s: f64 = a
            .samples()
            .iter()
            .zip(b.samples())
            .map(|(p, q)| (p - q).norm_sqr())
            .sum();
        (s / a.len() as f64).sqrt()
    };
    let half = propagate(&w, &fiber(40.0, 17.0)).expect("valid fiber");
    let twice = propagate(&half, &fiber(40.0, 17.0)).expect("valid fiber");
    let once = propagate(&w, &fiber(80.0, 17.0)).expect("valid fiber");
    let back = propagate(&once, &fiber(80.0, -17.0)).expect("valid fiber");
    let (e1, e2) = (rms(&twice, &once), rms(&back, &w));
    check(
        "dispersion_compose_invert",
        e1 < 1e-9 && e2 < 1e-9,
        format!("compose {e1:.1e}, invert {e2:.1e} RMS"),
    )
}

fn fading_notch() -> Check {
    let f = FiberParams::with_length(80.0);
    let lambda = 1550e-9;
    let d = 17e-6;
    let oracle = (SPEED_OF_LIGHT / (2.0 * lambda * lambda * d * 80e3)).sqrt();
    let got = f.first_fading_notch_hz().unwrap_or(0.0);
    check(
        "fading_notch_80km",
        (got - oracle).abs() < 1e6 && (got / 1e9 - 6.8).abs() <= 0.2,
        format!("{:.3} GHz", got / 1e9),
    )
}

fn esn_step_direct() -> Check {
    let mut r = rng::rng(9);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = r.random_range(1..=8);
        let k = r.random_range(1..=3);
        let alpha = r.random_range(0.05..=1.0);
        let w_in = DMatrix::from_fn(n, k + 1, |_, _| r.random_range(-1.0..1.0));
        let dense: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| StandardNormal.sample(&mut r)).collect())
            .collect();
        let trip = (0..n * n)
            .map(|p| (p / n, p % n, dense[p / n][p % n]))
            .collect();
        let mut m = EsnModel::from_parts(w_in.clone(), CsrMatrix::from_triplets(n, n, trip), alpha)
            .expect("valid model");
        let x0: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        m.set_state(&x0).expect("matching length");
        let mut u = vec![1.0];
        u.extend((0..k).map(|_| r.random_range(-2.0..2.0)));
        let got = esn_step(&mut m, &u).expect("matching input").to_vec();
        for i in 0..n {
            let mut a = 0.0;
            for j in 0..=k {
                a += w_in[(i, j)] * u[j];
            }
            for j in 0..n {
                a += dense[i][j] * x0[j];
            }
            let want = alpha * a.tanh() + (1.0 - alpha) * x0[i];
            worst = worst.max((got[i] - want).abs());
        }
    }
    check(
        "esn_step_direct",
        worst <= 1e-12,
        format!("max deviation {worst:.1e}"),
    )
}

fn ber_constructed() -> Check {
    let truth = vec![0u8; 200_000];
    let mut d = truth.clone();
    for i in 0..45 {
        d[i * 4444] = 1;
    }
    let ok = count_ber(&d, &truth, 0)
        .map(|b| b.errors == 45 && b.ber == 2.25e-4 && !b.below_kp4)
        .unwrap_or(false);
    check("ber_45_of_200000", ok, "2.25e-4, above KP4".into())
}

fn wilson_coverage() -> Check {
    let (p, n) = (2e-4, 200_000u64);
    let bin = Binomial::new(n, p).expect("valid binomial");
    let mut r = rng::rng(2024);
    let covered = (0..1000)
        .filter(|_| {
            let (lo, hi) = wilson_interval(bin.sample(&mut r), n, Z_95);
            lo <= p && p <= hi
        })
        .count();
    check("wilson_coverage", covered >= 930, format!("{covered}/1000"))
}

fn back_to_back() -> Check {
    let cfg = ExperimentConfig {
        symbols: 20_000,
        measurements: 1,
        osnr_db: vec![f64::INFINITY],
        receivers: vec![Receiver::BROADBAND],
        equalizers: vec![EqualizerSpec::new(EqualizerKind::Ffe)],
        ..ExperimentConfig::default()
    };
    match run_sweep(&cfg, 1, false) {
        Ok(r) => check(
            "back_to_back_ffe",
            r[0].errors == Some(0),
            format!("{:?} errors in {:?} bits", r[0].errors, r[0].bits),
        ),
        Err(e) => check("back_to_back_ffe", false, e.to_string()),
    }
}

pub fn run() -> Vec<Check> {
    vec![
        rrc_cascade(),
        dispersion_inverse(),
        fading_notch(),
        esn_step_direct(),
        ber_constructed(),
        wilson_coverage(),
        back_to_back(),
    ]
}
