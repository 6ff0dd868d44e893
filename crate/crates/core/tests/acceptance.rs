//! Acceptance criteria 1 to 9 at desk scale. Each criterion prints one
//! PASS or FAIL line; the test fails if any criterion fails.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal, StandardNormal};
use rayon::prelude::*;

use optoeq::channel::{propagate, FiberParams, SPEED_OF_LIGHT};
use optoeq::equalizers::{
    esn_init, esn_step, esn_train_readout, ffe_train, CsrMatrix, EsnModel, EsnParams, FfeParams,
};
use optoeq::harness::sweep::{measurement_seed, sweep_points};
use optoeq::harness::{canned, ExperimentConfig, ResultRecord, Runner};
use optoeq::metrics::{count_ber, wilson_interval, KP4_BER_THRESHOLD, Z_95};
use optoeq::sigkit::ComplexWaveform;

const SUITE_BUDGET_S: f64 = 15.0 * 60.0;
const POINT_BUDGET_S: f64 = 120.0;

struct Verdict {
    id: u32,
    passed: bool,
    detail: String,
}

fn report(id: u32, passed: bool, detail: String) -> Verdict {
    println!(
        "criterion {id}: {} {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    Verdict { id, passed, detail }
}

fn fig(name: &str, overrides: &[&str]) -> ExperimentConfig {
    let o: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
    canned::config(name, &o).expect("canned config with overrides is valid")
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Run every point of `cfg` for every measurement on the global pool,
/// timing each point. Output order follows the sweep order.
fn run_timed(cfg: &ExperimentConfig) -> Vec<(ResultRecord, f64)> {
    let runner = Runner::new(cfg, false).expect("valid config");
    let tasks: Vec<_> = sweep_points(cfg)
        .into_iter()
        .flat_map(|p| (0..cfg.measurements).map(move |i| (p.clone(), i)))
        .collect();
    tasks
        .par_iter()
        .map(|(p, i)| {
            let t = Instant::now();
            let r = runner.run_point(p, measurement_seed(cfg, *i));
            (r, t.elapsed().as_secs_f64())
        })
        .collect()
}

fn label(r: &ResultRecord) -> String {
    let n = r.n_neurons.map(|n| format!("({n})")).unwrap_or_default();
    format!("{} km {} {}{n}", r.distance_km, r.slice_set, r.equalizer)
}

fn ber(r: &ResultRecord) -> f64 {
    assert!(r.is_ok(), "{}", r.status);
    r.ber.expect("successful record has a BER")
}

/// BER per (distance, slice set) for the measurements of one equalizer.
fn by_point(records: &[ResultRecord]) -> BTreeMap<(u64, String), Vec<f64>> {
    let mut m: BTreeMap<(u64, String), Vec<f64>> = BTreeMap::new();
    for r in records {
        m.entry((r.distance_km as u64, r.slice_set.clone()))
            .or_default()
            .push(ber(r));
    }
    m
}

fn criterion_1() -> Verdict {
    // One measurement whose held-out part exceeds 50k symbols.
    let cfg = fig(
        "fig3a",
        &[
            "distances_km=[0, 5]",
            "receivers=[\"broadband\"]",
            "symbols=53000",
            "measurements=1",
        ],
    );
    let held_out = cfg.symbols - cfg.train_symbols();
    let runs = run_timed(&cfg);
    let mut fails = Vec::new();
    let mut worst = (0.0f64, 0.0f64);
    for (r, t) in &runs {
        let b = ber(r);
        worst = (worst.0.max(b), worst.1.max(*t));
        if !(b < KP4_BER_THRESHOLD && *t <= POINT_BUDGET_S) {
            fails.push(format!("{} BER {b:.2e} in {t:.0} s", label(r)));
        }
    }
    report(
        1,
        fails.is_empty() && held_out >= 50_000,
        format!(
            "{} points over {held_out} symbols, worst BER {:.2e}, slowest point {:.0} s {:?}",
            runs.len(),
            worst.0,
            worst.1,
            fails
        ),
    )
}

/// Small-signal RF response of dispersive fiber after square-law detection,
/// probed one tone at a time; returns the frequency of the deepest fade in
/// `[lo, hi]` Hz.
fn simulated_notch_hz(length_km: f64, lo: f64, hi: f64) -> f64 {
    let fs = 64e9;
    let n = 6400;
    let df = fs / n as f64;
    let fiber = FiberParams {
        loss_db_per_km: 0.0,
        ..FiberParams::with_length(length_km)
    };
    let mut best = (f64::INFINITY, 0.0);
    let (k0, k1) = ((lo / df).round() as usize, (hi / df).round() as usize);
    for k in k0..=k1 {
        let f = k as f64 * df;
        let field: Vec<Complex64> = (0..n)
            .map(|i| {
                Complex64::new(
                    1.0 + 0.01 * (2.0 * std::f64::consts::PI * f * i as f64 / fs).cos(),
                    0.0,
                )
            })
            .collect();
        let w = ComplexWaveform::new(field, fs).unwrap();
        let out = propagate(&w, &fiber).unwrap();
        let bin: Complex64 = out
            .samples()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                e.norm_sqr()
                    * Complex64::from_polar(
                        1.0,
                        -2.0 * std::f64::consts::PI * (k * i) as f64 / n as f64,
                    )
            })
            .sum();
        if bin.norm() < best.0 {
            best = (bin.norm(), f);
        }
    }
    best.1
}

fn criterion_2() -> Verdict {
    let cfg = fig(
        "fig3a",
        &[
            "distances_km=[40, 60, 80]",
            "receivers=[\"broadband\"]",
            "measurements=1",
        ],
    );
    let runs = run_timed(&cfg);
    let low: Vec<String> = runs
        .iter()
        .filter(|(r, _)| ber(r) <= 1e-2)
        .map(|(r, _)| format!("{} BER {:.2e}", label(r), ber(r)))
        .collect();
    let best = runs.iter().map(|(r, _)| ber(r)).fold(1.0, f64::min);
    let notch = simulated_notch_hz(80.0, 4e9, 10e9);
    let oracle = (SPEED_OF_LIGHT / (2.0 * 1550e-9 * 1550e-9 * 17e-6 * 80e3)).sqrt();
    let notch_ok = (notch - 6.8e9).abs() <= 0.2e9 && (notch - oracle).abs() <= 0.05e9;
    report(
        2,
        low.is_empty() && notch_ok,
        format!(
            "lowest 1-PD BER at >= 40 km {best:.2e} {low:?}; notch {:.2} GHz, oracle {:.2} GHz",
            notch / 1e9,
            oracle / 1e9
        ),
    )
}

/// Criteria 3 and 5 share one slice-subset sweep at 40 and 80 km. The
/// four-slice ESN(500) BERs at 80 km come from the fig3c run, which uses
/// the same base seed, link and reservoir parameters.
fn criteria_3_and_5(four_slice_80km: Option<&Vec<f64>>) -> (Verdict, Verdict) {
    let Some(four_80) = four_slice_80km else {
        let msg = "no four-slice ESN(500) results at 80 km from fig3c".to_string();
        return (report(3, false, msg.clone()), report(5, false, msg));
    };
    let cfg = fig(
        "fig3b",
        &[
            "distances_km=[40, 80]",
            "receivers=[\"broadband\", [3, 4], [2, 3]]",
        ],
    );
    let runs = run_timed(&cfg);
    let recs: Vec<ResultRecord> = runs.into_iter().map(|(r, _)| r).collect();
    let m = by_point(&recs);
    let get = |d: u64, s: &str| m[&(d, s.to_string())].clone();

    let (one, four) = (median(get(80, "broadband")), median(four_80.clone()));
    let c3 = report(
        3,
        one >= 10.0 * four,
        format!(
            "80 km ESN(500) median BER 1-PD {one:.2e}, 4-PD {four:.2e}, ratio {:.1}",
            one / four
        ),
    );

    let base = get(40, "broadband");
    let mut beats = Vec::new();
    let mut ok40 = true;
    for s in ["3+4", "2+3"] {
        let sub = get(40, s);
        let wins = sub.iter().zip(&base).filter(|(a, b)| a < b).count();
        ok40 &= wins == base.len();
        beats.push(format!("{s} beats 1-PD on {wins}/{} seeds", base.len()));
    }
    let full = four;
    let pairs: Vec<(String, f64)> = ["3+4", "2+3"]
        .iter()
        .map(|s| (s.to_string(), median(get(80, s))))
        .collect();
    let ok80 = pairs.iter().all(|(_, b)| full <= *b);
    let c5 = report(
        5,
        ok40 && ok80,
        format!(
            "40 km: {}; 80 km median BER 4-slice {full:.2e} vs {}",
            beats.join(", "),
            pairs
                .iter()
                .map(|(s, b)| format!("{s} {b:.2e}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
    (c3, c5)
}

fn run_binary(args: &[&str], out: &std::path::Path) -> Result<String, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_optoeq"))
        .args(args)
        .arg("--out")
        .arg(out)
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("{args:?} exited with {status}"));
    }
    std::fs::read_to_string(out).map_err(|e| e.to_string())
}

/// Criterion 4 reads the first fig3c run; criterion 8 compares both.
fn fig3c_twice() -> (Result<String, String>, Result<String, String>) {
    let dir = tempfile::tempdir().expect("temporary directory");
    let a = run_binary(&["fig3c", "--jobs", "8"], &dir.path().join("a.csv"));
    let b = run_binary(&["fig3c", "--jobs", "8"], &dir.path().join("b.csv"));
    (a, b)
}

/// 80 km measurement BERs per reservoir size, in seed order, from a fig3c CSV.
fn fig3c_80km(csv_text: &Result<String, String>) -> Result<BTreeMap<usize, Vec<f64>>, String> {
    let text = csv_text
        .as_ref()
        .map_err(|e| format!("fig3c run failed: {e}"))?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| e.to_string())?.clone();
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let (cd, cn, ce, cb, ck) = (
        col("distance_km"),
        col("n_neurons"),
        col("errors"),
        col("bits"),
        col("kind"),
    );
    let mut per_n: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for row in reader.records() {
        let row = row.map_err(|e| e.to_string())?;
        if &row[ck] != "measurement" || row[cd].parse::<f64>().unwrap() != 80.0 {
            continue;
        }
        let e: f64 = row[ce].parse().unwrap();
        let b: f64 = row[cb].parse().unwrap();
        per_n
            .entry(row[cn].parse().unwrap())
            .or_default()
            .push(e / b);
    }
    Ok(per_n)
}

fn criterion_4(per_n: &Result<BTreeMap<usize, Vec<f64>>, String>) -> Verdict {
    let per_n = match per_n {
        Ok(m) => m,
        Err(e) => return report(4, false, e.clone()),
    };
    let meds: Vec<(usize, f64)> = per_n.iter().map(|(n, v)| (*n, median(v.clone()))).collect();
    let sizes: Vec<usize> = meds.iter().map(|m| m.0).collect();
    let monotone = meds.windows(2).all(|w| w[1].1 <= w[0].1);
    report(
        4,
        monotone && sizes == [50, 100, 200, 500],
        format!(
            "80 km median BER by N: {}",
            meds.iter()
                .map(|(n, b)| format!("{n}: {b:.2e}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    )
}

fn criterion_6() -> Verdict {
    let mut r = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = r.random_range(1..=8);
        let k = r.random_range(1..=4);
        let alpha = r.random_range(0.01..=1.0);
        let w_in: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..=k).map(|_| r.random_range(-2.0..2.0)).collect())
            .collect();
        let w_res: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        if r.random_bool(0.5) {
                            StandardNormal.sample(&mut r)
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        let x0: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        let mut u = vec![1.0];
        u.extend((0..k).map(|_| r.random_range(-3.0..3.0)));

        let mut m = EsnModel::from_parts(
            DMatrix::from_fn(n, k + 1, |i, j| w_in[i][j]),
            CsrMatrix::from_dense(&w_res),
            alpha,
        )
        .unwrap();
        m.set_state(&x0).unwrap();
        let got = esn_step(&mut m, &u).unwrap().to_vec();
        for i in 0..n {
            let a: f64 = (0..=k).map(|j| w_in[i][j] * u[j]).sum::<f64>()
                + (0..n).map(|j| w_res[i][j] * x0[j]).sum::<f64>();
            let want = alpha * a.tanh() + (1.0 - alpha) * x0[i];
            worst = worst.max((got[i] - want).abs());
        }
    }
    report(
        6,
        worst <= 1e-12,
        format!("max deviation {worst:.1e} over 1000 instances"),
    )
}

fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
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

fn dispersion_oracle() -> (f64, f64) {
    let mut r = ChaCha8Rng::seed_from_u64(7);
    let x: Vec<Complex64> = (0..8192)
        .map(|_| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        .collect();
    let w = ComplexWaveform::new(x, 256e9).unwrap();
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
    let twice = propagate(
        &propagate(&w, &fiber(30.0, 17.0)).unwrap(),
        &fiber(50.0, 17.0),
    )
    .unwrap();
    let once = propagate(&w, &fiber(80.0, 17.0)).unwrap();
    let back = propagate(&once, &fiber(80.0, -17.0)).unwrap();
    (rms(&twice, &once), rms(&back, &w))
}

/// Two-tap toy channel: T/2-spaced chips through h plus white noise; the
/// decision target is every second chip.
fn lms_vs_wiener() -> f64 {
    let (h, s2, taps) = ([1.0, 0.5], 0.01, 32usize);
    let mut r = ChaCha8Rng::seed_from_u64(12);
    let n_sym = 200_000;
    let chips: Vec<f64> = (0..2 * n_sym)
        .map(|_| if r.random_bool(0.5) { 1.0 } else { -1.0 })
        .collect();
    let noise = Normal::new(0.0, f64::sqrt(s2)).unwrap();
    let rx: Vec<f64> = (0..chips.len())
        .map(|m| {
            noise.sample(&mut r) + h[0] * chips[m] + if m > 0 { h[1] * chips[m - 1] } else { 0.0 }
        })
        .collect();
    let sym: Vec<f64> = (0..n_sym).map(|n| chips[2 * n]).collect();

    let acf = |lag: usize| match lag {
        0 => h[0] * h[0] + h[1] * h[1] + s2,
        1 => h[0] * h[1],
        _ => 0.0,
    };
    let rm: Vec<Vec<f64>> = (0..taps)
        .map(|i| (0..taps).map(|j| acf(i.abs_diff(j))).collect())
        .collect();
    let half = taps / 2;
    let p: Vec<f64> = (0..taps)
        .map(|j| match j.checked_sub(half) {
            Some(0) => h[0],
            Some(1) => h[1],
            _ => 0.0,
        })
        .collect();
    let mse = |w: &[f64]| {
        let rw: Vec<f64> = rm
            .iter()
            .map(|row| row.iter().zip(w).map(|(a, b)| a * b).sum())
            .collect();
        1.0 - 2.0 * p.iter().zip(w).map(|(a, b)| a * b).sum::<f64>()
            + w.iter().zip(&rw).map(|(a, b)| a * b).sum::<f64>()
    };
    let j_min = mse(&gauss_solve(rm.clone(), p.clone()));
    let params = FfeParams {
        n_taps: taps,
        step_size: 1e-4,
        ..FfeParams::default()
    };
    let (st, _) = ffe_train(&[rx], &sym, &params).unwrap();
    (mse(&st.taps[0]) - j_min) / j_min
}

fn readout_vs_normal_equations() -> f64 {
    let p = EsnParams {
        n_neurons: 7,
        sparsity: 0.5,
        washout: 60,
        ridge_lambda: 1e-3,
        seed: 21,
        ..EsnParams::default()
    };
    let (k, sps, len) = (2usize, 2usize, 1600usize);
    let mut m = esn_init(&p, k).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(22);
    let inputs: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..len).map(|_| r.random_range(-1.0..1.0)).collect())
        .collect();
    let targets: Vec<f64> = (0..len / sps)
        .map(|_| if r.random_bool(0.5) { 1.0 } else { -1.0 })
        .collect();
    esn_train_readout(&mut m, &inputs, sps, &targets, &p).unwrap();

    let n = p.n_neurons;
    let w_res = m.w_res().to_dense();
    let mut x = vec![0.0; n];
    let d = 1 + k + n;
    let mut ata = vec![vec![0.0; d]; d];
    let mut aty = vec![0.0; d];
    for i in 0..len {
        let u = [1.0, inputs[0][i], inputs[1][i]];
        let next: Vec<f64> = (0..n)
            .map(|a| {
                let s: f64 = (0..=k).map(|j| m.w_in()[(a, j)] * u[j]).sum::<f64>()
                    + (0..n).map(|j| w_res[a][j] * x[j]).sum::<f64>();
                p.leak_rate * s.tanh() + (1.0 - p.leak_rate) * x[a]
            })
            .collect();
        x = next;
        if i % sps == 0 && i >= p.washout {
            let row: Vec<f64> = u.iter().chain(&x).copied().collect();
            let y = targets[i / sps];
            for a in 0..d {
                aty[a] += row[a] * y;
                for b in 0..d {
                    ata[a][b] += row[a] * row[b];
                }
            }
        }
    }
    for (a, row) in ata.iter_mut().enumerate() {
        row[a] += p.ridge_lambda;
    }
    let want = gauss_solve(ata, aty);
    m.w_out()
        .unwrap()
        .iter()
        .zip(&want)
        .map(|(g, w)| (g - w).abs())
        .fold(0.0, f64::max)
}

/// A reservoir with zero input and recurrent weights leaves only the bias
/// and raw input in the feature vector, so the readout must be y = 3u + 2.
fn bypass_affine() -> f64 {
    let mut r = ChaCha8Rng::seed_from_u64(31);
    let u: Vec<f64> = (0..4000).map(|_| r.random_range(-1.0..1.0)).collect();
    let y: Vec<f64> = u.iter().map(|v| 3.0 * v + 2.0).collect();
    let mut m = EsnModel::from_parts(
        DMatrix::zeros(4, 2),
        CsrMatrix::from_triplets(4, 4, vec![]),
        0.9,
    )
    .unwrap();
    let p = EsnParams {
        ridge_lambda: 1e-10,
        washout: 500,
        ..EsnParams::default()
    };
    esn_train_readout(&mut m, &[u], 1, &y, &p).unwrap();
    let w = m.w_out().unwrap();
    (w[0] - 2.0).abs().max((w[1] - 3.0).abs())
}

fn criterion_7() -> Verdict {
    let (compose, invert) = dispersion_oracle();
    let lms = lms_vs_wiener();
    let readout = readout_vs_normal_equations();
    let bypass = bypass_affine();
    report(
        7,
        compose <= 1e-9
            && invert <= 1e-9
            && (0.0..=0.01).contains(&lms)
            && readout <= 1e-8
            && bypass <= 1e-8,
        format!(
            "dispersion compose {compose:.1e} / invert {invert:.1e} RMS; LMS excess MSE {:.2}%; \
             readout {readout:.1e}; bypass {bypass:.1e}",
            100.0 * lms
        ),
    )
}

fn criterion_8(a: &Result<String, String>, b: &Result<String, String>) -> Verdict {
    let truth = vec![0u8; 200_000];
    let mut d = truth.clone();
    for i in 0..45 {
        d[i * 4000 + 17] = 1;
    }
    let est = count_ber(&d, &truth, 0).unwrap();
    let exact = est.errors == 45 && est.bits == 200_000 && est.ber == 2.25e-4;

    let (p, n, trials) = (1e-3, 50_000u64, 2000);
    let bin = Binomial::new(n, p).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(8);
    let covered = (0..trials)
        .filter(|_| {
            let (lo, hi) = wilson_interval(bin.sample(&mut r), n, Z_95);
            lo <= p && p <= hi
        })
        .count();
    let coverage = covered as f64 / trials as f64;

    let body = |t: &str| {
        t.split_once('\n')
            .map(|(_, rest)| rest.to_string())
            .unwrap_or_default()
    };
    let identical = match (a, b) {
        (Ok(x), Ok(y)) => !body(x).is_empty() && body(x) == body(y),
        _ => false,
    };
    report(
        8,
        exact && coverage >= 0.93 && identical,
        format!(
            "45/200000 -> {:e}; Wilson coverage {:.1}%; fig3c --jobs 8 twice byte-identical: {identical}",
            est.ber,
            100.0 * coverage
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let start = Instant::now();
    let mut verdicts = vec![criterion_6(), criterion_7()];
    let (a, b) = fig3c_twice();
    let per_n = fig3c_80km(&a);
    verdicts.push(criterion_4(&per_n));
    verdicts.push(criterion_8(&a, &b));
    verdicts.push(criterion_1());
    verdicts.push(criterion_2());
    let (c3, c5) = criteria_3_and_5(per_n.as_ref().ok().and_then(|m| m.get(&500)));
    verdicts.push(c3);
    verdicts.push(c5);
    let elapsed = start.elapsed().as_secs_f64();
    verdicts.push(report(
        9,
        elapsed <= SUITE_BUDGET_S,
        format!(
            "suite took {elapsed:.0} s on {} core(s), budget {SUITE_BUDGET_S:.0} s",
            std::thread::available_parallelism().map_or(1, |n| n.get())
        ),
    ));
    verdicts.sort_by_key(|v| v.id);
    println!("\nacceptance summary");
    for v in &verdicts {
        println!(
            "  {} criterion {}: {}",
            if v.passed { "PASS" } else { "FAIL" },
            v.id,
            v.detail
        );
    }
    let failed: Vec<u32> = verdicts
        .iter()
        .filter(|v| !v.passed)
        .map(|v| v.id)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
