//! Windowed two-layer network (tanh hidden layer, linear output) trained by
//! Levenberg–Marquardt on the full Jacobian.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::TrainReport;
use crate::error::{invalid, Error, Result};
use crate::rng::{self, Stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FnnParams {
    pub hidden_neurons: usize,
    pub window_symbols: usize,
    pub sps: usize,
    pub max_epochs: usize,
    /// Training stops once an accepted step lowers the MSE by less than this.
    pub min_improvement: f64,
    pub initial_damping: f64,
    pub max_damping: f64,
}

impl Default for FnnParams {
    fn default() -> Self {
        Self {
            hidden_neurons: 32,
            window_symbols: 5,
            sps: 8,
            max_epochs: 100,
            min_improvement: 1e-6,
            initial_damping: 1e-3,
            max_damping: 1e10,
        }
    }
}

impl FnnParams {
    pub fn validate(&self) -> Result<()> {
        if self.hidden_neurons == 0 || self.sps == 0 {
            return invalid("hidden_neurons and sps must be at least 1");
        }
        if self.window_symbols == 0 || self.window_symbols.is_multiple_of(2) {
            return invalid("window_symbols must be odd so the window is centred");
        }
        if !(self.initial_damping > 0.0 && self.max_damping >= self.initial_damping) {
            return invalid("damping bounds must satisfy 0 < initial <= max");
        }
        Ok(())
    }

    /// Feature width for `k` channels.
    pub fn input_width(&self, k: usize) -> usize {
        self.window_symbols * self.sps * k
    }
}

/// Sliding-window feature rows; row `i` belongs to symbol `first_symbol + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowFeatures {
    pub first_symbol: usize,
    pub rows: DMatrix<f64>,
}

impl WindowFeatures {
    pub fn n_rows(&self) -> usize {
        self.rows.nrows()
    }

    pub fn width(&self) -> usize {
        self.rows.ncols()
    }

    /// Rows for symbols `first..first + count`, clipped to what exists.
    pub fn symbol_range(&self, first: usize, count: usize) -> WindowFeatures {
        let lo = (first.max(self.first_symbol) - self.first_symbol).min(self.n_rows());
        let hi = (first + count)
            .saturating_sub(self.first_symbol)
            .min(self.n_rows())
            .max(lo);
        WindowFeatures {
            first_symbol: self.first_symbol + lo,
            rows: self.rows.rows(lo, hi - lo).into_owned(),
        }
    }
}

/// Row `t` concatenates, per channel, the `window·sps` samples starting at
/// `(t − window/2)·sps − sps/2`, so symbol centres `t−2 .. t+2` (for a
/// 5-symbol window) sit mid-slot. Rows whose window leaves the stream are
/// dropped.
pub fn fnn_window_features(
    channels: &[Vec<f64>],
    sps: usize,
    window_symbols: usize,
) -> Result<WindowFeatures> {
    if channels.is_empty() || sps == 0 || window_symbols == 0 {
        return invalid("need at least one channel, sps >= 1 and a non-empty window");
    }
    let len = channels[0].len();
    if channels.iter().any(|c| c.len() != len) {
        return invalid("channels differ in length");
    }
    let half = window_symbols / 2;
    let off = sps / 2;
    let span = window_symbols * sps;
    let t_min = half + off.div_ceil(sps);
    if len + off < span {
        return invalid("stream shorter than one feature window");
    }
    let t_max = half + (len + off - span) / sps;
    if t_max < t_min {
        return invalid("stream shorter than one feature window");
    }
    let n_rows = t_max - t_min + 1;
    let width = span * channels.len();
    let mut rows = DMatrix::<f64>::zeros(n_rows, width);
    for (k, c) in channels.iter().enumerate() {
        for j in 0..span {
            let mut col = rows.column_mut(k * span + j);
            for (i, v) in col.iter_mut().enumerate() {
                let start = (t_min + i - half) * sps - off;
                *v = c[start + j];
            }
        }
    }
    Ok(WindowFeatures {
        first_symbol: t_min,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FnnModel {
    /// H×D
    pub w1: DMatrix<f64>,
    pub b1: DVector<f64>,
    pub w2: DVector<f64>,
    pub b2: f64,
}

impl FnnModel {
    pub fn input_width(&self) -> usize {
        self.w1.ncols()
    }

    pub fn hidden(&self) -> usize {
        self.w1.nrows()
    }

    pub fn n_params(&self) -> usize {
        let (h, d) = self.w1.shape();
        h * d + 2 * h + 1
    }

    fn init(h: usize, d: usize, seed: u64) -> Self {
        let mut r = rng::rng(rng::derive(seed, Stream::Network));
        let s1 = 1.0 / (d as f64).sqrt();
        let s2 = 1.0 / (h as f64).sqrt();
        let w1 = DMatrix::from_fn(h, d, |_, _| r.random_range(-s1..s1));
        let b1 = DVector::from_fn(h, |_, _| r.random_range(-0.5..0.5));
        let w2 = DVector::from_fn(h, |_, _| r.random_range(-s2..s2));
        Self {
            w1,
            b1,
            w2,
            b2: 0.0,
        }
    }

    /// Hidden activations (R×H) and outputs.
    fn forward(&self, x: &DMatrix<f64>) -> (DMatrix<f64>, DVector<f64>) {
        let mut z = x * self.w1.transpose();
        for (i, mut col) in z.column_iter_mut().enumerate() {
            let b = self.b1[i];
            col.iter_mut().for_each(|v| *v = (*v + b).tanh());
        }
        let mut y = &z * &self.w2;
        y.add_scalar_mut(self.b2);
        (z, y)
    }

    fn step(&self, delta: &DVector<f64>) -> Self {
        let (h, d) = self.w1.shape();
        let mut m = self.clone();
        for i in 0..h {
            for j in 0..d {
                m.w1[(i, j)] += delta[i * d + j];
            }
        }
        for i in 0..h {
            m.b1[i] += delta[h * d + i];
            m.w2[i] += delta[h * d + h + i];
        }
        m.b2 += delta[h * d + 2 * h];
        m
    }
}

fn mse(y: &DVector<f64>, t: &DVector<f64>) -> f64 {
    (y - t).norm_squared() / y.len() as f64
}

/// Output sensitivities `g_ri = w2_i (1 − h_ri²)`.
fn sensitivities(m: &FnnModel, hid: &DMatrix<f64>) -> DMatrix<f64> {
    let mut g = hid.clone();
    for (i, mut col) in g.column_iter_mut().enumerate() {
        let w = m.w2[i];
        col.iter_mut().for_each(|v| *v = w * (1.0 - *v * *v));
    }
    g
}

/// Jacobian of the outputs with parameters ordered `[W1 row-major | b1 | w2 | b2]`.
fn jacobian(x: &DMatrix<f64>, g: &DMatrix<f64>, hid: &DMatrix<f64>) -> DMatrix<f64> {
    let (r, d) = x.shape();
    let h = g.ncols();
    let mut j = DMatrix::<f64>::zeros(r, h * d + 2 * h + 1);
    for i in 0..h {
        let gi = g.column(i);
        for k in 0..d {
            j.column_mut(i * d + k)
                .zip_zip_apply(&gi, &x.column(k), |o, a, b| *o = a * b);
        }
        j.column_mut(h * d + i).copy_from(&gi);
        j.column_mut(h * d + h + i).copy_from(&hid.column(i));
    }
    j.column_mut(h * d + 2 * h).fill(1.0);
    j
}

/// Gauss–Newton system for one epoch, in whichever of the primal
/// (parameters ≤ rows) or dual form is smaller.
enum Normal {
    /// `JᵀJ` and `Jᵀe`.
    Primal {
        jtj: DMatrix<f64>,
        jte: DVector<f64>,
    },
    /// `JJᵀ`, `e` and the factors needed to apply `Jᵀ`.
    Dual {
        jjt: DMatrix<f64>,
        e: DVector<f64>,
        g: DMatrix<f64>,
        hid: DMatrix<f64>,
    },
}

impl Normal {
    fn build(
        m: &FnnModel,
        x: &DMatrix<f64>,
        xxt: Option<&DMatrix<f64>>,
        hid: DMatrix<f64>,
        e: DVector<f64>,
    ) -> Self {
        let g = sensitivities(m, &hid);
        match xxt {
            None => {
                let j = jacobian(x, &g, &hid);
                let jt = j.transpose();
                Normal::Primal {
                    jtj: &jt * &j,
                    jte: &jt * &e,
                }
            }
            Some(xxt) => {
                // JJᵀ = (XXᵀ + 1) ∘ GGᵀ + HHᵀ + 1
                let ggt = &g * g.transpose();
                let hht = &hid * hid.transpose();
                let mut jjt = xxt.add_scalar(1.0).component_mul(&ggt) + hht;
                jjt.add_scalar_mut(1.0);
                Normal::Dual { jjt, e, g, hid }
            }
        }
    }

    /// Solve `(JᵀJ + μI) δ = −Jᵀe`; `None` if the damped matrix is not
    /// numerically positive definite.
    fn solve(&self, x: &DMatrix<f64>, mu: f64) -> Option<DVector<f64>> {
        match self {
            Normal::Primal { jtj, jte } => {
                let mut a = jtj.clone();
                a.fill_diagonal(0.0);
                a += DMatrix::from_diagonal(&(jtj.diagonal().add_scalar(mu)));
                let ch = a.cholesky()?;
                Some(-ch.solve(jte))
            }
            Normal::Dual { jjt, e, g, hid } => {
                let mut a = jjt.clone();
                for i in 0..a.nrows() {
                    a[(i, i)] += mu;
                }
                let v = a.cholesky()?.solve(e);
                // δ = −Jᵀv
                let (d, h) = (x.ncols(), g.ncols());
                let mut gv = g.clone();
                for mut col in gv.column_iter_mut() {
                    col.component_mul_assign(&v);
                }
                let w1 = x.transpose() * &gv; // D×H
                let mut delta = DVector::<f64>::zeros(h * d + 2 * h + 1);
                for i in 0..h {
                    for k in 0..d {
                        delta[i * d + k] = -w1[(k, i)];
                    }
                    delta[h * d + i] = -gv.column(i).sum();
                    delta[h * d + h + i] = -hid.column(i).dot(&v);
                }
                delta[h * d + 2 * h] = -v.sum();
                Some(delta)
            }
        }
    }
}

/// Train on feature rows against `targets` (one per row).
pub fn fnn_train(
    features: &DMatrix<f64>,
    targets: &[f64],
    p: &FnnParams,
    seed: u64,
) -> Result<(FnnModel, TrainReport)> {
    p.validate()?;
    let (r, d) = features.shape();
    if r == 0 || r != targets.len() {
        return invalid(format!("{r} feature rows but {} targets", targets.len()));
    }
    if d == 0 || d % (p.window_symbols * p.sps) != 0 {
        return invalid(format!(
            "feature width {d} is not a multiple of window_symbols·sps = {}",
            p.window_symbols * p.sps
        ));
    }
    let t = DVector::from_column_slice(targets);
    let mut model = FnnModel::init(p.hidden_neurons, d, seed);
    let dual = model.n_params() > r;
    let xxt = dual.then(|| features * features.transpose());
    let (mut hid, mut y) = model.forward(features);
    let mut err = mse(&y, &t);
    let mut mu = p.initial_damping;
    let mut epochs = 0;
    let mut converged = false;
    while epochs < p.max_epochs {
        epochs += 1;
        let e = &y - &t;
        let normal = Normal::build(&model, features, xxt.as_ref(), hid.clone(), e);
        let mut accepted = None;
        while mu <= p.max_damping {
            match normal.solve(features, mu) {
                None => mu *= 10.0,
                Some(delta) => {
                    let cand = model.step(&delta);
                    let (h2, y2) = cand.forward(features);
                    let e2 = mse(&y2, &t);
                    if e2 < err {
                        mu = (mu / 10.0).max(f64::MIN_POSITIVE);
                        accepted = Some((cand, h2, y2, e2));
                        break;
                    }
                    mu *= 10.0;
                }
            }
        }
        let Some((cand, h2, y2, e2)) = accepted else {
            if !err.is_finite() {
                return Err(Error::TrainingDiverged(
                    "network output is not finite".into(),
                ));
            }
            // No damping level reduces the error: a local minimum.
            converged = true;
            break;
        };
        let gain = err - e2;
        model = cand;
        hid = h2;
        y = y2;
        err = e2;
        if gain < p.min_improvement {
            converged = true;
            break;
        }
    }
    if !err.is_finite() {
        return Err(Error::TrainingDiverged(
            "network output is not finite".into(),
        ));
    }
    Ok((
        model,
        TrainReport {
            train_mse: err,
            n_train_samples: r,
            converged,
            iterations: epochs,
            min_norm_fallback: false,
        },
    ))
}

pub fn fnn_infer(m: &FnnModel, features: &DMatrix<f64>) -> Result<Vec<f64>> {
    if features.ncols() != m.input_width() {
        return invalid(format!(
            "feature width {} does not match the network input {}",
            features.ncols(),
            m.input_width()
        ));
    }
    Ok(m.forward(features).1.as_slice().to_vec())
}
