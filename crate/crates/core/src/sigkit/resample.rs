use num_complex::Complex64;
use num_integer::Integer;

use super::spectral::{fft, ifft};
use super::waveform::{ComplexWaveform, RealWaveform};
use crate::error::{invalid, Result};

/// Largest reduced numerator/denominator accepted for a rate conversion.
pub const MAX_RATIO_DENOMINATOR: u64 = 1_000_000;

/// Reduced `(up, down)` with `target / source == up / down`.
pub fn rational_ratio(source: f64, target: f64) -> Result<(u64, u64)> {
    if !(source > 0.0 && source.is_finite() && target > 0.0 && target.is_finite()) {
        return invalid(format!(
            "rates must be positive and finite ({source}, {target})"
        ));
    }
    const EXACT: f64 = 9_007_199_254_740_992.0; // 2^53
    let (up, down) =
        if source.fract() == 0.0 && target.fract() == 0.0 && source < EXACT && target < EXACT {
            let (s, t) = (source as u64, target as u64);
            let g = s.gcd(&t);
            (t / g, s / g)
        } else {
            continued_fraction(target / source)?
        };
    if up > MAX_RATIO_DENOMINATOR || down > MAX_RATIO_DENOMINATOR {
        return invalid(format!(
            "rate ratio {target}/{source} reduces to {up}/{down}, beyond {MAX_RATIO_DENOMINATOR}"
        ));
    }
    Ok((up, down))
}

fn continued_fraction(r: f64) -> Result<(u64, u64)> {
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut x = r;
    for _ in 0..64 {
        let a = x.floor();
        if a > MAX_RATIO_DENOMINATOR as f64 * 4.0 {
            break;
        }
        let a = a as u64;
        let h2 = a.saturating_mul(h1).saturating_add(h0);
        let k2 = a.saturating_mul(k1).saturating_add(k0);
        if k2 > MAX_RATIO_DENOMINATOR || h2 > MAX_RATIO_DENOMINATOR {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64 / k1 as f64) - r).abs() <= 1e-12 * r {
            return Ok((h1, k1));
        }
        let frac = x - a as f64;
        if frac == 0.0 {
            break;
        }
        x = 1.0 / frac;
    }
    invalid(format!(
        "rate ratio {r} has no rational form with denominator <= {MAX_RATIO_DENOMINATOR}"
    ))
}

/// Rational-ratio resampling by spectral zero-padding/truncation, which
/// realizes ideal anti-image and anti-alias filtering for a periodic signal.
///
/// The input is first truncated to a multiple of the reduced denominator so
/// the output period maps exactly onto the input period.
pub fn resample(w: &ComplexWaveform, target_rate: f64) -> Result<ComplexWaveform> {
    let (up, down) = rational_ratio(w.sample_rate(), target_rate)?;
    if up == down {
        return Ok(w.clone());
    }
    let (up, down) = (up as usize, down as usize);
    let n = (w.len() / down) * down;
    if n == 0 {
        return invalid(format!(
            "waveform of {} samples is shorter than the ratio denominator {down}",
            w.len()
        ));
    }
    let m = n / down * up;
    let mut x = w.samples()[..n].to_vec();
    fft(&mut x);

    let zero = Complex64::new(0.0, 0.0);
    let mut y = vec![zero; m];
    let short = n.min(m);
    let half = short / 2;
    // DC and strictly-inside bins on both sides.
    let pos = if short.is_multiple_of(2) {
        half
    } else {
        half + 1
    };
    y[..pos].copy_from_slice(&x[..pos]);
    for k in 1..=(short - pos) {
        if short.is_multiple_of(2) && k == half {
            continue;
        }
        y[m - k] = x[n - k];
    }
    if short.is_multiple_of(2) {
        // The bin at +-short/2 is ambiguous: split it when interpolating,
        // fold both halves when decimating.
        if m > n {
            let v = x[half] * 0.5;
            y[half] = v;
            y[m - half] = v;
        } else {
            y[half] = x[half] + x[n - half];
        }
    }
    ifft(&mut y);
    let scale = m as f64 / n as f64;
    y.iter_mut().for_each(|z| *z *= scale);
    let rate = w.sample_rate() * up as f64 / down as f64;
    Ok(ComplexWaveform::from_parts(y, rate))
}

/// [`resample`] for real signals.
pub fn resample_real(x: &RealWaveform, target_rate: f64) -> Result<RealWaveform> {
    let out = resample(&x.to_complex(), target_rate)?;
    Ok(RealWaveform {
        samples: out.samples().iter().map(|z| z.re).collect(),
        sample_rate: out.sample_rate(),
    })
}
