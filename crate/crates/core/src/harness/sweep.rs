//! Sweep expansion, parallel execution and per-point aggregation.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equalizers::{
    esn_init, AnyEqualizer, EsnEqualizer, EsnModel, EsnParams, FfeEqualizer, FnnEqualizer,
};
use crate::error::{Error, Result};
use crate::metrics::{BerResult, KP4_BER_THRESHOLD};

use super::config::{EqualizerKind, EqualizerSpec, ExperimentConfig};
use super::link::{simulate_link, LinkOutput, Receiver};
use super::point::score;

/// One equalizer after expanding the reservoir-size list.
#[derive(Debug, Clone, PartialEq)]
pub struct Variant {
    pub kind: EqualizerKind,
    pub spec: EqualizerSpec,
    /// Reservoir size for ESN, hidden width for FNN, none for FFE.
    pub n_neurons: Option<usize>,
}

/// One cell of the sweep's Cartesian product.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub distance_km: f64,
    pub osnr_db: f64,
    pub receiver: Receiver,
    pub variant: Variant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    Measurement,
    Summary,
}

/// One row of output. Measurement rows carry their seed; summary rows
/// aggregate every measurement of a point and carry none.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub distance_km: f64,
    /// `None` for a noiseless amplifier.
    pub osnr_db: Option<f64>,
    pub n_pds: usize,
    pub slice_set: String,
    pub equalizer: String,
    pub n_neurons: Option<usize>,
    pub seed: Option<u64>,
    pub errors: Option<u64>,
    pub bits: Option<u64>,
    pub ber: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub below_kp4: Option<bool>,
    pub train_mse: Option<f64>,
    pub wall_s: Option<f64>,
    pub kind: RecordKind,
    /// `ok`, or what went wrong at this point.
    pub status: String,
}

impl ResultRecord {
    fn blank(point: &SweepPoint, seed: Option<u64>, kind: RecordKind) -> Self {
        Self {
            distance_km: point.distance_km,
            osnr_db: point.osnr_db.is_finite().then_some(point.osnr_db),
            n_pds: point.receiver.n_pds(),
            slice_set: point.receiver.label(),
            equalizer: point.variant.kind.label().into(),
            n_neurons: point.variant.n_neurons,
            seed,
            errors: None,
            bits: None,
            ber: None,
            ci_low: None,
            ci_high: None,
            below_kp4: None,
            train_mse: None,
            wall_s: None,
            kind,
            status: "ok".into(),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

/// Expand equalizer specs into variants, in configuration order.
pub fn variants(cfg: &ExperimentConfig) -> Vec<Variant> {
    let mut out = Vec::new();
    for spec in &cfg.equalizers {
        match spec.kind {
            EqualizerKind::Esn => {
                let sizes = if spec.n_neurons.is_empty() {
                    vec![spec.esn.n_neurons]
                } else {
                    spec.n_neurons.clone()
                };
                for n in sizes {
                    let mut s = spec.clone();
                    s.esn.n_neurons = n;
                    s.esn.washout = cfg.washout;
                    out.push(Variant {
                        kind: spec.kind,
                        spec: s,
                        n_neurons: Some(n),
                    });
                }
            }
            EqualizerKind::Ffe => out.push(Variant {
                kind: spec.kind,
                spec: spec.clone(),
                n_neurons: None,
            }),
            EqualizerKind::Fnn => out.push(Variant {
                kind: spec.kind,
                spec: spec.clone(),
                n_neurons: Some(spec.fnn.hidden_neurons),
            }),
        }
    }
    out
}

/// Cartesian product distance × OSNR × receiver × variant, in that nesting.
pub fn sweep_points(cfg: &ExperimentConfig) -> Vec<SweepPoint> {
    let vars = variants(cfg);
    let mut out = Vec::new();
    for &d in &cfg.distances_km {
        for &o in &cfg.osnr_db {
            for r in &cfg.receivers {
                for v in &vars {
                    out.push(SweepPoint {
                        distance_km: d,
                        osnr_db: o,
                        receiver: r.clone(),
                        variant: v.clone(),
                    });
                }
            }
        }
    }
    out
}

pub fn measurement_seed(cfg: &ExperimentConfig, i: usize) -> u64 {
    cfg.base_seed ^ i as u64
}

type ReservoirKey = (usize, u64, String);
type ReservoirSlot = Arc<OnceLock<std::result::Result<EsnModel, String>>>;

/// Shared state of one sweep: the calibrated transmitter and drawn
/// reservoirs, which depend only on the seed and not on the link.
pub struct Runner<'a> {
    cfg: &'a ExperimentConfig,
    mod_index: f64,
    timing: bool,
    reservoirs: Mutex<HashMap<ReservoirKey, ReservoirSlot>>,
}

impl<'a> Runner<'a> {
    pub fn new(cfg: &'a ExperimentConfig, timing: bool) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            mod_index: cfg.link.resolve_mod_index()?,
            timing,
            reservoirs: Mutex::new(HashMap::new()),
        })
    }

    fn reservoir_seed(&self, spec: &EsnParams, seed: u64) -> u64 {
        if self.cfg.redraw_reservoir {
            spec.seed ^ seed
        } else {
            spec.seed ^ self.cfg.base_seed
        }
    }

    fn reservoir(&self, p: &EsnParams, n_inputs: usize) -> Result<EsnModel> {
        let key_params = serde_json::to_string(p).expect("parameters serialize");
        let slot = self
            .reservoirs
            .lock()
            .expect("reservoir cache lock")
            .entry((n_inputs, p.seed, key_params))
            .or_default()
            .clone();
        slot.get_or_init(|| esn_init(p, n_inputs).map_err(|e| e.to_string()))
            .clone()
            .map_err(Error::InvalidState)
    }

    fn equalizer(&self, v: &Variant, seed: u64, n_inputs: usize) -> Result<AnyEqualizer> {
        Ok(match v.kind {
            EqualizerKind::Esn => {
                let p = EsnParams {
                    seed: self.reservoir_seed(&v.spec.esn, seed),
                    ..v.spec.esn.clone()
                };
                let model = self.reservoir(&p, n_inputs)?;
                AnyEqualizer::Esn(EsnEqualizer::with_reservoir(p, model))
            }
            EqualizerKind::Ffe => AnyEqualizer::Ffe(FfeEqualizer::new(v.spec.ffe.clone())),
            EqualizerKind::Fnn => AnyEqualizer::Fnn(FnnEqualizer::new(v.spec.fnn.clone(), seed)),
        })
    }

    pub fn simulate(&self, point: &SweepPoint, seed: u64) -> Result<LinkOutput> {
        let osnr = point.osnr_db.is_finite().then_some(point.osnr_db);
        simulate_link(
            &self.cfg.link,
            self.mod_index,
            point.distance_km,
            osnr,
            &point.receiver,
            self.cfg.symbols,
            seed,
        )
    }

    /// Equalize an already simulated link for `point`.
    pub fn evaluate(&self, point: &SweepPoint, seed: u64, link: &LinkOutput) -> ResultRecord {
        let mut rec = ResultRecord::blank(point, Some(seed), RecordKind::Measurement);
        let start = Instant::now();
        let outcome = self
            .equalizer(&point.variant, seed, point.receiver.n_pds())
            .and_then(|mut eq| {
                score(
                    link,
                    &mut eq,
                    self.cfg.link.sps_dsp,
                    self.cfg.train_symbols(),
                    self.cfg.washout,
                )
            });
        match outcome {
            Ok(s) => {
                fill_ber(&mut rec, &s.ber);
                rec.train_mse = Some(s.train.train_mse);
                if self.timing {
                    rec.wall_s = Some(start.elapsed().as_secs_f64());
                }
            }
            Err(e) => rec.status = failure(point, seed, &e),
        }
        rec
    }

    /// Full chain for one point and measurement seed.
    pub fn run_point(&self, point: &SweepPoint, seed: u64) -> ResultRecord {
        match self.simulate(point, seed) {
            Ok(link) => self.evaluate(point, seed, &link),
            Err(e) => {
                let mut rec = ResultRecord::blank(point, Some(seed), RecordKind::Measurement);
                rec.status = failure(point, seed, &e);
                rec
            }
        }
    }
}

fn failure(point: &SweepPoint, seed: u64, e: &Error) -> String {
    format!(
        "error at {} km, OSNR {} dB, slices {}, {}{}, seed {seed}: {e}",
        point.distance_km,
        point.osnr_db,
        point.receiver.label(),
        point.variant.kind.label(),
        point
            .variant
            .n_neurons
            .map(|n| format!("({n})"))
            .unwrap_or_default(),
    )
}

fn fill_ber(rec: &mut ResultRecord, b: &BerResult) {
    rec.errors = Some(b.errors);
    rec.bits = Some(b.bits);
    rec.ber = Some(b.ber);
    rec.ci_low = Some(b.ci95_low);
    rec.ci_high = Some(b.ci95_high);
    rec.below_kp4 = Some(b.below_kp4);
}

/// Mean BER over the successful measurements of one point. Counts and the
/// confidence interval pool all counted bits.
pub fn summarize(point: &SweepPoint, measurements: &[&ResultRecord]) -> ResultRecord {
    let mut rec = ResultRecord::blank(point, None, RecordKind::Summary);
    let ok: Vec<&&ResultRecord> = measurements.iter().filter(|r| r.is_ok()).collect();
    let failed = measurements.len() - ok.len();
    if ok.is_empty() {
        rec.status = format!("all {} measurements failed", measurements.len());
        return rec;
    }
    let errors: u64 = ok.iter().filter_map(|r| r.errors).sum();
    let bits: u64 = ok.iter().filter_map(|r| r.bits).sum();
    let n = ok.len() as f64;
    let mean_ber = ok.iter().filter_map(|r| r.ber).sum::<f64>() / n;
    if let Ok(pooled) = BerResult::from_counts(errors, bits) {
        fill_ber(&mut rec, &pooled);
    }
    rec.ber = Some(mean_ber);
    rec.below_kp4 = Some(mean_ber < KP4_BER_THRESHOLD);
    rec.train_mse = Some(ok.iter().filter_map(|r| r.train_mse).sum::<f64>() / n);
    if ok.iter().all(|r| r.wall_s.is_some()) {
        rec.wall_s = Some(ok.iter().filter_map(|r| r.wall_s).sum());
    }
    if failed > 0 {
        rec.status = format!("{failed} of {} measurements failed", measurements.len());
    }
    rec
}

/// Run every point × measurement on a pool of `jobs` threads. Measurement
/// records come first in sweep order, then one summary per point; the
/// output does not depend on `jobs`.
pub fn run_sweep(cfg: &ExperimentConfig, jobs: usize, timing: bool) -> Result<Vec<ResultRecord>> {
    let runner = Runner::new(cfg, timing)?;
    let points = sweep_points(cfg);
    let n_var = variants(cfg).len();
    // Points sharing distance, OSNR and receiver share one simulated link.
    let groups = points.len() / n_var;
    let tasks: Vec<(usize, usize)> = (0..groups)
        .flat_map(|g| (0..cfg.measurements).map(move |i| (g, i)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidState(format!("thread pool: {e}")))?;
    let mut results: Vec<(usize, usize, ResultRecord)> = pool.install(|| {
        tasks
            .par_iter()
            .flat_map_iter(|&(g, i)| {
                let seed = measurement_seed(cfg, i);
                let group = &points[g * n_var..(g + 1) * n_var];
                let link = runner.simulate(&group[0], seed);
                group
                    .iter()
                    .enumerate()
                    .map(|(v, p)| {
                        let rec = match &link {
                            Ok(l) => runner.evaluate(p, seed, l),
                            Err(e) => {
                                let mut r =
                                    ResultRecord::blank(p, Some(seed), RecordKind::Measurement);
                                r.status = failure(p, seed, e);
                                r
                            }
                        };
                        (g * n_var + v, i, rec)
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    });
    results.sort_by_key(|(p, i, _)| (*p, *i));
    let mut records: Vec<ResultRecord> = results.into_iter().map(|(_, _, r)| r).collect();
    let m = cfg.measurements;
    let summaries: Vec<ResultRecord> = points
        .iter()
        .enumerate()
        .map(|(k, p)| summarize(p, &records[k * m..(k + 1) * m].iter().collect::<Vec<_>>()))
        .collect();
    records.extend(summaries);
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> ExperimentConfig {
        let text = r#"
            symbols = 20000
            measurements = 2
            base_seed = 11
            distances_km = [0, 5]
            receivers = ["broadband", [2, 3]]
            [[equalizers]]
            kind = "ffe"
            [[equalizers]]
            kind = "esn"
            n_neurons = [10, 20]
        "#;
        ExperimentConfig::from_toml_str(text).unwrap()
    }

    #[test]
    fn expansion_counts_and_order() {
        let cfg = small_config();
        let v = variants(&cfg);
        assert_eq!(
            v.iter().map(|v| v.n_neurons).collect::<Vec<_>>(),
            vec![None, Some(10), Some(20)]
        );
        let pts = sweep_points(&cfg);
        assert_eq!(pts.len(), 2 * 2 * 3);
        assert_eq!(pts[3].receiver, Receiver::Slices(vec![2, 3]));
        assert_eq!(measurement_seed(&cfg, 3), 11 ^ 3);
    }

    #[test]
    fn sweep_is_complete_and_independent_of_jobs() {
        let cfg = small_config();
        let a = run_sweep(&cfg, 1, false).unwrap();
        let b = run_sweep(&cfg, 3, false).unwrap();
        assert_eq!(a, b);
        let points = 12;
        assert_eq!(a.len(), points * cfg.measurements + points);
        assert!(a[..points * 2]
            .iter()
            .all(|r| r.kind == RecordKind::Measurement));
        assert!(a[points * 2..]
            .iter()
            .all(|r| r.kind == RecordKind::Summary && r.seed.is_none()));
        assert!(
            a.iter().all(|r| r.is_ok()),
            "{:?}",
            a.iter().find(|r| !r.is_ok())
        );
        // Broadband detection at 0 and 5 km is error free for every equalizer.
        assert!(a
            .iter()
            .filter(|r| r.n_pds == 1)
            .all(|r| r.errors == Some(0)));
    }

    #[test]
    fn measurements_depend_only_on_their_own_seed() {
        let mut cfg = small_config();
        cfg.distances_km = vec![5.0];
        cfg.receivers = vec![Receiver::Slices(vec![2, 3])];
        let two = run_sweep(&cfg, 1, false).unwrap();
        cfg.measurements = 3;
        let three = run_sweep(&cfg, 2, false).unwrap();
        // Per point: measurements 0 and 1 are unchanged by adding a third.
        for p in 0..3 {
            assert_eq!(two[p * 2..p * 2 + 2], three[p * 3..p * 3 + 2]);
        }
        let runner = Runner::new(&cfg, false).unwrap();
        let p = &sweep_points(&cfg)[2];
        assert_eq!(
            runner.run_point(p, measurement_seed(&cfg, 1)),
            three[2 * 3 + 1]
        );
        assert_ne!(three[6].train_mse, three[7].train_mse);
    }

    #[test]
    fn failures_are_recorded_not_fatal() {
        let mut cfg = small_config();
        cfg.distances_km = vec![0.0];
        cfg.receivers = vec![Receiver::BROADBAND];
        // A 2500-symbol prefix cannot fit a 3000-neuron readout.
        cfg.equalizers[1].n_neurons = vec![3000];
        let recs = run_sweep(&cfg, 1, false).unwrap();
        assert_eq!(recs.len(), 2 * 2 + 2);
        let bad: Vec<_> = recs.iter().filter(|r| !r.is_ok()).collect();
        assert_eq!(bad.len(), 3);
        assert!(bad[0].status.contains("esn(3000)"), "{}", bad[0].status);
        assert!(bad.iter().all(|r| r.ber.is_none()));
        assert!(recs[0].is_ok() && recs[4].is_ok());
    }

    #[test]
    fn summary_pools_counts_and_averages_ber() {
        let cfg = small_config();
        let p = &sweep_points(&cfg)[0];
        let mk = |errors: u64, bits: u64| {
            let mut r = ResultRecord::blank(p, Some(0), RecordKind::Measurement);
            fill_ber(&mut r, &BerResult::from_counts(errors, bits).unwrap());
            r.train_mse = Some(0.1);
            r
        };
        let (a, b) = (mk(10, 1000), mk(0, 3000));
        let mut c = mk(0, 1);
        c.status = "error".into();
        let s = summarize(p, &[&a, &b, &c]);
        assert_eq!((s.errors, s.bits), (Some(10), Some(4000)));
        assert_eq!(s.ber, Some(0.005));
        assert_eq!(s.status, "1 of 3 measurements failed");
        assert_eq!(s.kind, RecordKind::Summary);
    }
}
