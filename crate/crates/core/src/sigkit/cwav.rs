//! `CWAV` waveform dump: a 16-byte little-endian header (magic `CWAV`,
//! u32 version, f64 sample rate) followed by interleaved f64 (re, im) pairs.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::waveform::ComplexWaveform;
use crate::error::{Error, Result};

pub const CWAV_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"CWAV";

pub fn write_cwav<W: Write>(mut out: W, w: &ComplexWaveform) -> Result<()> {
    let mut buf = Vec::with_capacity(16 + 16 * w.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&CWAV_VERSION.to_le_bytes());
    buf.extend_from_slice(&w.sample_rate().to_le_bytes());
    for z in w.samples() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

fn bad(reason: impl Into<String>) -> Error {
    Error::Format {
        what: "CWAV file",
        reason: reason.into(),
    }
}

pub fn read_cwav<R: Read>(mut input: R) -> Result<ComplexWaveform> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() < 16 {
        return Err(bad("shorter than the 16-byte header"));
    }
    if &bytes[..4] != MAGIC {
        return Err(bad("bad magic"));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != CWAV_VERSION {
        return Err(bad(format!("unsupported version {version}")));
    }
    let rate = f64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let body = &bytes[16..];
    if body.len() % 16 != 0 {
        return Err(bad("payload is not a whole number of (re, im) pairs"));
    }
    let samples = body
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    ComplexWaveform::new(samples, rate)
}
