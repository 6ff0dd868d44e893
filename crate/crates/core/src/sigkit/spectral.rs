use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::waveform::{ComplexWaveform, RealWaveform};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    })
}

/// In-place unnormalized forward DFT.
pub(crate) fn fft(buf: &mut [Complex64]) {
    plan(buf.len(), false).process(buf);
}

/// In-place inverse DFT including the 1/N normalization.
pub(crate) fn ifft(buf: &mut [Complex64]) {
    plan(buf.len(), true).process(buf);
    let scale = 1.0 / buf.len() as f64;
    buf.iter_mut().for_each(|z| *z *= scale);
}

/// Unnormalized DFT of a waveform, in FFT bin order.
pub fn spectrum(w: &ComplexWaveform) -> Vec<Complex64> {
    let mut buf = w.samples().to_vec();
    fft(&mut buf);
    buf
}

/// Bin frequencies of an `n`-point DFT at rate `fs`, in FFT order, mapped
/// onto [-fs/2, fs/2).
pub fn fft_frequencies(n: usize, fs: f64) -> Vec<f64> {
    let df = fs / n as f64;
    (0..n)
        .map(|k| {
            if 2 * k < n {
                k as f64 * df
            } else {
                (k as f64 - n as f64) * df
            }
        })
        .collect()
}

/// Circular frequency-domain filtering over the whole signal.
pub fn freq_filter<F>(w: &ComplexWaveform, response: F) -> ComplexWaveform
where
    F: Fn(f64) -> Complex64,
{
    let mut buf = w.samples().to_vec();
    fft(&mut buf);
    for (z, f) in buf
        .iter_mut()
        .zip(fft_frequencies(w.len(), w.sample_rate()))
    {
        *z *= response(f);
    }
    ifft(&mut buf);
    ComplexWaveform::from_parts(buf, w.sample_rate())
}

/// [`freq_filter`] for a real signal; keeps the real part of the result.
/// Responses with Hermitian symmetry leave a real output.
pub fn freq_filter_real<F>(x: &RealWaveform, response: F) -> RealWaveform
where
    F: Fn(f64) -> Complex64,
{
    let out = freq_filter(&x.to_complex(), response);
    RealWaveform {
        samples: out.samples().iter().map(|z| z.re).collect(),
        sample_rate: x.sample_rate,
    }
}

/// Averaged periodogram over `segments` non-overlapping rectangular
/// segments. Returns ascending frequencies and a density normalized so that
/// `sum(psd) * df` equals the mean power.
pub fn periodogram(w: &ComplexWaveform, segments: usize) -> (Vec<f64>, Vec<f64>) {
    let segments = segments.max(1).min(w.len());
    let seg_len = w.len() / segments;
    let fs = w.sample_rate();
    let mut acc = vec![0.0; seg_len];
    let mut buf = vec![Complex64::new(0.0, 0.0); seg_len];
    for s in 0..segments {
        buf.copy_from_slice(&w.samples()[s * seg_len..(s + 1) * seg_len]);
        fft(&mut buf);
        for (a, z) in acc.iter_mut().zip(&buf) {
            *a += z.norm_sqr();
        }
    }
    let scale = 1.0 / (segments as f64 * seg_len as f64 * fs);
    let freqs = fft_frequencies(seg_len, fs);
    let mut pairs: Vec<(f64, f64)> = freqs
        .into_iter()
        .zip(acc.into_iter().map(|a| a * scale))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}
