//! Leaky echo-state network with a ridge-regression readout.
//!
//! State update, with the bias folded into `u` as a constant-1 first element:
//!
//! `x[n] = α·tanh(W_in·u[n] + W_res·x[n−1]) + (1−α)·x[n−1]`
//!
//! and readout `y[n] = W_out·[1; u_1..u_K; x[n]]`.

use nalgebra::{DMatrix, DVector};
use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::linalg::{least_squares, LeastSquares};
use super::sparse::CsrMatrix;
use super::TrainReport;
use crate::error::{invalid, Error, Result};
use crate::rng::{self, Stream};

/// Reservoir redraws allowed before giving up on the echo-state check.
pub const MAX_INIT_ATTEMPTS: usize = 10;
/// Steps driven by the echo-state check.
pub const ECHO_PROBE_STEPS: usize = 1000;
/// Required contraction of the state distance over the probe.
pub const ECHO_CONTRACTION: f64 = 1e-3;
/// Independent probes a reservoir must pass at init.
pub const ECHO_PROBES: u64 = 16;
/// Gain applied to `W_res` per shrink trial when no raw draw is echo-state.
pub const SHRINK_STEP: f64 = 0.95;
pub const MAX_SHRINK_STEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EsnParams {
    pub n_neurons: usize,
    pub leak_rate: f64,
    pub sparsity: f64,
    pub input_scale: f64,
    pub seed: u64,
    pub ridge_lambda: f64,
    /// Leading samples excluded from readout training.
    pub washout: usize,
    /// Readout for symbol `n` is taken `readout_delay` symbols after its centre.
    pub readout_delay: usize,
    /// Rescale the N(0,1) recurrent draw to this spectral radius; `None`
    /// keeps the raw weights.
    pub spectral_radius: Option<f64>,
}

impl Default for EsnParams {
    fn default() -> Self {
        Self {
            n_neurons: 500,
            leak_rate: 0.9,
            sparsity: 0.98,
            input_scale: 1.0,
            seed: 0,
            ridge_lambda: 1e-8,
            washout: 1000,
            readout_delay: 0,
            spectral_radius: None,
        }
    }
}

impl EsnParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_neurons == 0 {
            return invalid("n_neurons must be at least 1");
        }
        if !(self.leak_rate > 0.0 && self.leak_rate <= 1.0) {
            return invalid(format!("leak rate {} outside (0, 1]", self.leak_rate));
        }
        if !(0.0..1.0).contains(&self.sparsity) {
            return invalid(format!("sparsity {} outside [0, 1)", self.sparsity));
        }
        if !(self.input_scale.is_finite() && self.input_scale >= 0.0) {
            return invalid("input_scale must be finite and non-negative");
        }
        if !(self.ridge_lambda.is_finite() && self.ridge_lambda >= 0.0) {
            return invalid("ridge_lambda must be finite and non-negative");
        }
        if let Some(r) = self.spectral_radius {
            if !(r.is_finite() && r > 0.0) {
                return invalid(format!("spectral radius {r} must be finite and positive"));
            }
        }
        Ok(())
    }

    /// Number of nonzero recurrent weights: ⌈(1−sparsity)·N²⌉.
    pub fn reservoir_nnz(&self) -> usize {
        let total = (self.n_neurons * self.n_neurons) as f64;
        // Guard against 0.02·N² landing a hair above an integer.
        let raw = (1.0 - self.sparsity) * total;
        let nnz = (raw - raw.abs() * 1e-12).ceil().max(0.0) as usize;
        nnz.min(self.n_neurons * self.n_neurons)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EsnModel {
    /// N×(K+1), column 0 multiplies the bias input.
    w_in: DMatrix<f64>,
    w_res: CsrMatrix,
    leak_rate: f64,
    /// Scale applied to the N(0,1) draw by normalization and shrinking.
    reservoir_gain: f64,
    /// Length 1+K+N: `[bias | input | reservoir]`.
    w_out: Option<DVector<f64>>,
    state: Vec<f64>,
    scratch: Vec<f64>,
}

impl EsnModel {
    /// Assemble a model from explicit weights. `w_in` is N×(inputs incl. bias).
    pub fn from_parts(w_in: DMatrix<f64>, w_res: CsrMatrix, leak_rate: f64) -> Result<Self> {
        let n = w_in.nrows();
        if n == 0 || w_in.ncols() == 0 {
            return invalid("W_in must be non-empty");
        }
        if w_res.n_rows() != n || w_res.n_cols() != n {
            return invalid(format!(
                "W_res is {}x{}, expected {n}x{n}",
                w_res.n_rows(),
                w_res.n_cols()
            ));
        }
        if !(leak_rate > 0.0 && leak_rate <= 1.0) {
            return invalid(format!("leak rate {leak_rate} outside (0, 1]"));
        }
        Ok(Self {
            w_in,
            w_res,
            leak_rate,
            reservoir_gain: 1.0,
            w_out: None,
            state: vec![0.0; n],
            scratch: vec![0.0; n],
        })
    }

    pub fn n_neurons(&self) -> usize {
        self.w_in.nrows()
    }

    /// Input dimension including the bias element.
    pub fn input_dim(&self) -> usize {
        self.w_in.ncols()
    }

    pub fn w_in(&self) -> &DMatrix<f64> {
        &self.w_in
    }

    pub fn w_res(&self) -> &CsrMatrix {
        &self.w_res
    }

    pub fn leak_rate(&self) -> f64 {
        self.leak_rate
    }

    pub fn reservoir_gain(&self) -> f64 {
        self.reservoir_gain
    }

    pub(crate) fn set_reservoir_gain(&mut self, g: f64) {
        self.reservoir_gain = g;
    }

    pub fn w_out(&self) -> Option<&DVector<f64>> {
        self.w_out.as_ref()
    }

    pub fn set_w_out(&mut self, w: DVector<f64>) -> Result<()> {
        let want = self.input_dim() + self.n_neurons();
        if w.len() != want {
            return invalid(format!("W_out has length {}, expected {want}", w.len()));
        }
        self.w_out = Some(w);
        Ok(())
    }

    pub fn state(&self) -> &[f64] {
        &self.state
    }

    pub fn set_state(&mut self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_neurons() {
            return invalid("state length does not match the reservoir size");
        }
        self.state.copy_from_slice(x);
        Ok(())
    }

    pub fn reset(&mut self) {
        self.state.iter_mut().for_each(|v| *v = 0.0);
    }

    /// Advance the state by one input frame `u` (bias element included).
    pub fn step(&mut self, u: &[f64]) -> Result<&[f64]> {
        if u.len() != self.input_dim() {
            return invalid(format!(
                "input has {} elements, reservoir expects {}",
                u.len(),
                self.input_dim()
            ));
        }
        self.step_unchecked(u);
        Ok(&self.state)
    }

    #[inline]
    fn step_unchecked(&mut self, u: &[f64]) {
        advance(
            &self.w_in,
            &self.w_res,
            self.leak_rate,
            u,
            &mut self.state,
            &mut self.scratch,
        );
    }

    /// `W_out·[1; u_1..u_K; x]` for the current state; `u` includes the bias.
    fn readout(&self, w: &DVector<f64>, u: &[f64]) -> f64 {
        let w = w.as_slice();
        let k1 = u.len();
        let mut y = w[0];
        for i in 1..k1 {
            y += w[i] * u[i];
        }
        y + dot(&w[k1..], &self.state)
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One leaky-tanh update of `x` in place.
#[inline]
fn advance(
    w_in: &DMatrix<f64>,
    w_res: &CsrMatrix,
    alpha: f64,
    u: &[f64],
    x: &mut [f64],
    pre: &mut [f64],
) {
    pre.iter_mut().for_each(|v| *v = 0.0);
    w_res.mul_add(x, pre);
    for (j, &uj) in u.iter().enumerate() {
        if uj != 0.0 {
            for (p, w) in pre.iter_mut().zip(w_in.column(j).iter()) {
                *p += w * uj;
            }
        }
    }
    for (xi, p) in x.iter_mut().zip(pre.iter()) {
        *xi = alpha * tanh(*p) + (1.0 - alpha) * *xi;
    }
}

/// tanh through one `exp`; absolute error within a few ulp of `f64::tanh`
/// at roughly half the cost, which dominates the reservoir update.
#[inline]
fn tanh(v: f64) -> f64 {
    let e = (-2.0 * v.abs()).exp();
    ((1.0 - e) / (1.0 + e)).copysign(v)
}

/// Free-function form of [`EsnModel::step`].
pub fn esn_step<'a>(m: &'a mut EsnModel, u: &[f64]) -> Result<&'a [f64]> {
    m.step(u)
}

/// Draw a reservoir for `n_inputs` channels.
///
/// Up to [`MAX_INIT_ATTEMPTS`] raw draws are screened with the echo-state
/// contraction check. If none passes, the first draw's recurrent weights are
/// shrunk by [`SHRINK_STEP`] per trial until it does.
pub fn esn_init(p: &EsnParams, n_inputs: usize) -> Result<EsnModel> {
    p.validate()?;
    if n_inputs == 0 {
        return invalid("the reservoir needs at least one input");
    }
    let base = rng::derive(p.seed, Stream::Reservoir);
    let probe = rng::derive(base, Stream::EchoProbe);
    let screen =
        |m: &EsnModel| (0..ECHO_PROBES).all(|k| echo_state_holds(m, rng::derive_indexed(probe, k)));
    let mut first = None;
    for attempt in 0..MAX_INIT_ATTEMPTS {
        let model = draw_reservoir(p, n_inputs, rng::derive_indexed(base, attempt as u64))?;
        if screen(&model) {
            return Ok(model);
        }
        first.get_or_insert(model);
    }
    let mut model = first.expect("at least one draw");
    for _ in 0..MAX_SHRINK_STEPS {
        model.w_res.scale(SHRINK_STEP);
        model.reservoir_gain *= SHRINK_STEP;
        if screen(&model) {
            return Ok(model);
        }
    }
    Err(Error::NoEchoState {
        attempts: MAX_INIT_ATTEMPTS + MAX_SHRINK_STEPS,
    })
}

/// Draw weights without the echo-state screen.
pub fn draw_reservoir(p: &EsnParams, n_inputs: usize, seed: u64) -> Result<EsnModel> {
    let n = p.n_neurons;
    let mut r = rng::rng(seed);
    let w_in = DMatrix::from_fn(n, n_inputs + 1, |_, _| {
        r.random_range(-1.0..=1.0) * p.input_scale
    });
    let mut positions = index::sample(&mut r, n * n, p.reservoir_nnz()).into_vec();
    positions.sort_unstable();
    let triplets = positions
        .into_iter()
        .map(|k| {
            let v: f64 = StandardNormal.sample(&mut r);
            (k / n, k % n, v)
        })
        .collect();
    let mut w_res = CsrMatrix::from_triplets(n, n, triplets);
    let mut gain = 1.0;
    if let Some(target) = p.spectral_radius {
        let rho = spectral_radius(&w_res);
        // An all-zero reservoir has no radius to normalize.
        if rho > 0.0 {
            gain = target / rho;
            w_res.scale(gain);
        }
    }
    let mut model = EsnModel::from_parts(w_in, w_res, p.leak_rate)?;
    model.reservoir_gain = gain;
    Ok(model)
}

/// Largest eigenvalue modulus, from the real Schur form.
pub fn spectral_radius(w: &CsrMatrix) -> f64 {
    if w.nnz() == 0 {
        return 0.0;
    }
    let d = w.to_dense();
    DMatrix::from_fn(w.n_rows(), w.n_cols(), |r, c| d[r][c])
        .schur()
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Drive two copies of the reservoir, one from rest and one from a random
/// state, with the same Gaussian input and check that they merge.
pub fn echo_state_holds(m: &EsnModel, probe_seed: u64) -> bool {
    let n = m.n_neurons();
    let mut r = rng::rng(probe_seed);
    let mut xa = vec![0.0; n];
    let mut xb: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..=1.0)).collect();
    let d0 = distance(&xa, &xb);
    if d0 == 0.0 {
        return true;
    }
    let mut pre = vec![0.0; n];
    let mut u = vec![1.0; m.input_dim()];
    for _ in 0..ECHO_PROBE_STEPS {
        for v in u.iter_mut().skip(1) {
            *v = StandardNormal.sample(&mut r);
        }
        advance(&m.w_in, &m.w_res, m.leak_rate, &u, &mut xa, &mut pre);
        advance(&m.w_in, &m.w_res, m.leak_rate, &u, &mut xb, &mut pre);
    }
    distance(&xa, &xb) < ECHO_CONTRACTION * d0
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Sample indices at which symbol `n` is read out, paired with `n`.
fn readout_points(
    len: usize,
    sps: usize,
    n_symbols: usize,
    delay: usize,
    washout: usize,
) -> impl Iterator<Item = (usize, usize)> {
    (0..n_symbols)
        .map(move |n| (n, (n + delay) * sps))
        .filter(move |&(_, i)| i >= washout && i < len)
}

fn check_inputs(m: &EsnModel, inputs: &[Vec<f64>], sps: usize) -> Result<usize> {
    if sps == 0 {
        return invalid("sps must be at least 1");
    }
    if inputs.len() + 1 != m.input_dim() {
        return invalid(format!(
            "{} input channels given, reservoir built for {}",
            inputs.len(),
            m.input_dim() - 1
        ));
    }
    let len = inputs[0].len();
    if inputs.iter().any(|c| c.len() != len) {
        return invalid("input channels differ in length");
    }
    Ok(len)
}

/// Run the reservoir from rest over `inputs` and call `visit(sample, u, model)`
/// after every update.
fn drive(
    m: &mut EsnModel,
    inputs: &[Vec<f64>],
    last: usize,
    mut visit: impl FnMut(usize, &[f64], &EsnModel),
) {
    m.reset();
    let mut u = vec![1.0; m.input_dim()];
    for i in 0..last {
        for (k, c) in inputs.iter().enumerate() {
            u[k + 1] = c[i];
        }
        m.step_unchecked(&u);
        visit(i, &u, m);
    }
}

/// Fit `W_out` on symbol-centre states. `targets[n]` is the desired output
/// for symbol `n`; the reservoir runs from rest over `inputs` (one `Vec` per
/// channel, `sps` samples per symbol).
pub fn esn_train_readout(
    m: &mut EsnModel,
    inputs: &[Vec<f64>],
    sps: usize,
    targets: &[f64],
    p: &EsnParams,
) -> Result<TrainReport> {
    let len = check_inputs(m, inputs, sps)?;
    if !(p.ridge_lambda.is_finite() && p.ridge_lambda >= 0.0) {
        return invalid("ridge_lambda must be finite and non-negative");
    }
    let points: Vec<(usize, usize)> =
        readout_points(len, sps, targets.len(), p.readout_delay, p.washout).collect();
    let cols = m.input_dim() + m.n_neurons();
    if points.len() < cols {
        return invalid(format!(
            "{} training rows after washout, need at least {cols}",
            points.len()
        ));
    }
    let last = points.last().map_or(0, |&(_, i)| i + 1);
    let mut design = DMatrix::<f64>::zeros(points.len(), cols);
    let y = DVector::from_iterator(points.len(), points.iter().map(|&(n, _)| targets[n]));
    let mut row = 0;
    drive(m, inputs, last, |i, u, model| {
        if row < points.len() && points[row].1 == i {
            design[(row, 0)] = 1.0;
            for k in 1..u.len() {
                design[(row, k)] = u[k];
            }
            for (j, v) in model.state.iter().enumerate() {
                design[(row, u.len() + j)] = *v;
            }
            row += 1;
        }
    });
    let LeastSquares {
        solution,
        min_norm_fallback,
    } = least_squares(&design, &y, p.ridge_lambda)?;
    let resid = &design * &solution - &y;
    let train_mse = resid.norm_squared() / points.len() as f64;
    if !train_mse.is_finite() {
        return Err(Error::TrainingDiverged(
            "readout regression produced non-finite weights".into(),
        ));
    }
    m.w_out = Some(solution);
    Ok(TrainReport {
        train_mse,
        n_train_samples: points.len(),
        converged: true,
        iterations: 1,
        min_norm_fallback,
    })
}

/// Soft outputs for every symbol whose readout sample lies inside the stream.
/// Output `n` estimates symbol `n`.
pub fn esn_equalize(
    m: &mut EsnModel,
    inputs: &[Vec<f64>],
    sps: usize,
    readout_delay: usize,
) -> Result<Vec<f64>> {
    let len = check_inputs(m, inputs, sps)?;
    let w = m
        .w_out
        .clone()
        .ok_or_else(|| Error::InvalidState("ESN readout has not been trained".into()))?;
    let n_out = len.div_ceil(sps);
    let n_out = n_out.saturating_sub(readout_delay);
    let mut out = Vec::with_capacity(n_out);
    let mut next = readout_delay * sps;
    drive(m, inputs, len, |i, u, model| {
        if i == next {
            out.push(model.readout(&w, u));
            next += sps;
        }
    });
    Ok(out)
}
