//! EQLZ binary format for trained equalizers.
//!
//! Layout (all little-endian): magic `EQLZ`, u32 version, u32 tag
//! (1 ESN, 2 FFE, 3 FNN), u32 channel count K, K f64 means, K f64 standard
//! deviations, then a tag-specific body of u32 dimensions and f64 weights.

use nalgebra::{DMatrix, DVector};

use super::{
    AnyEqualizer, CsrMatrix, EsnEqualizer, EsnModel, EsnParams, FfeEqualizer, FfeParams, FfeState,
    FnnEqualizer, FnnModel, FnnParams, Standardizer, FFE_SPS,
};
use crate::error::{Error, Result};

pub const EQLZ_MAGIC: &[u8; 4] = b"EQLZ";
pub const EQLZ_VERSION: u32 = 1;

const TAG_ESN: u32 = 1;
const TAG_FFE: u32 = 2;
const TAG_FNN: u32 = 3;

struct Writer(Vec<u8>);

impl Writer {
    fn u32(&mut self, v: usize) -> Result<()> {
        let v =
            u32::try_from(v).map_err(|_| Error::InvalidArgument("dimension exceeds u32".into()))?;
        self.0.extend_from_slice(&v.to_le_bytes());
        Ok(())
    }

    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }

    fn f64s<'a>(&mut self, v: impl IntoIterator<Item = &'a f64>) {
        v.into_iter().for_each(|x| self.f64(*x));
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

fn malformed(reason: impl Into<String>) -> Error {
    Error::Format {
        what: "EQLZ blob",
        reason: reason.into(),
    }
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| malformed("truncated"))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<usize> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()) as usize)
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        if n > self.buf.len() / 8 {
            return Err(malformed("dimension larger than the blob"));
        }
        (0..n).map(|_| self.f64()).collect()
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(malformed("trailing bytes"));
        }
        Ok(())
    }
}

fn write_scaler(w: &mut Writer, s: &Standardizer) -> Result<()> {
    w.u32(s.mean.len())?;
    w.f64s(&s.mean);
    w.f64s(&s.std);
    Ok(())
}

fn read_scaler(r: &mut Reader) -> Result<Standardizer> {
    let k = r.u32()?;
    if k == 0 {
        return Err(malformed("zero channels"));
    }
    Ok(Standardizer {
        mean: r.f64s(k)?,
        std: r.f64s(k)?,
    })
}

fn untrained() -> Error {
    Error::InvalidState("only trained equalizers can be serialized".into())
}

pub(super) fn encode(eq: &AnyEqualizer) -> Result<Vec<u8>> {
    let mut w = Writer(Vec::new());
    w.0.extend_from_slice(EQLZ_MAGIC);
    w.u32(EQLZ_VERSION as usize)?;
    match eq {
        AnyEqualizer::Esn(e) => {
            let (m, s) = e
                .model
                .as_ref()
                .zip(e.scaler.as_ref())
                .ok_or_else(untrained)?;
            let w_out = m.w_out().ok_or_else(untrained)?;
            w.u32(TAG_ESN as usize)?;
            write_scaler(&mut w, s)?;
            w.u32(m.n_neurons())?;
            w.u32(m.input_dim())?;
            w.u32(e.params.readout_delay)?;
            w.f64(m.leak_rate());
            w.f64(m.reservoir_gain());
            w.f64s(m.w_in().iter());
            w.u32(m.w_res().nnz())?;
            for (r, c, v) in m.w_res().triplets() {
                w.u32(r)?;
                w.u32(c)?;
                w.f64(v);
            }
            w.f64s(w_out.iter());
        }
        AnyEqualizer::Ffe(e) => {
            let (st, s) = e
                .state
                .as_ref()
                .zip(e.scaler.as_ref())
                .ok_or_else(untrained)?;
            w.u32(TAG_FFE as usize)?;
            write_scaler(&mut w, s)?;
            w.u32(st.n_taps())?;
            w.f64(st.step_size);
            for t in &st.taps {
                w.f64s(t);
            }
        }
        AnyEqualizer::Fnn(e) => {
            let (m, s) = e
                .model
                .as_ref()
                .zip(e.scaler.as_ref())
                .ok_or_else(untrained)?;
            w.u32(TAG_FNN as usize)?;
            write_scaler(&mut w, s)?;
            w.u32(m.hidden())?;
            w.u32(m.input_width())?;
            w.u32(e.params.window_symbols)?;
            w.u32(e.params.sps)?;
            w.f64s(m.w1.transpose().iter());
            w.f64s(m.b1.iter());
            w.f64s(m.w2.iter());
            w.f64(m.b2);
        }
    }
    Ok(w.0)
}

pub(super) fn decode(bytes: &[u8]) -> Result<AnyEqualizer> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(4)? != EQLZ_MAGIC {
        return Err(malformed("bad magic"));
    }
    let version = r.u32()?;
    if version != EQLZ_VERSION as usize {
        return Err(malformed(format!("unsupported version {version}")));
    }
    let tag = r.u32()? as u32;
    let scaler = read_scaler(&mut r)?;
    let k = scaler.mean.len();
    let eq = match tag {
        TAG_ESN => {
            let n = r.u32()?;
            let dim = r.u32()?;
            if n == 0 || dim != k + 1 {
                return Err(malformed(
                    "reservoir dimensions disagree with channel count",
                ));
            }
            let readout_delay = r.u32()?;
            let leak = r.f64()?;
            let gain = r.f64()?;
            let w_in = DMatrix::from_column_slice(n, dim, &r.f64s(n * dim)?);
            let nnz = r.u32()?;
            if nnz > n * n {
                return Err(malformed("more reservoir weights than positions"));
            }
            let mut t = Vec::with_capacity(nnz);
            for _ in 0..nnz {
                let (i, j, v) = (r.u32()?, r.u32()?, r.f64()?);
                if i >= n || j >= n {
                    return Err(malformed("reservoir index out of range"));
                }
                t.push((i, j, v));
            }
            let mut model = EsnModel::from_parts(w_in, CsrMatrix::from_triplets(n, n, t), leak)
                .map_err(|e| malformed(e.to_string()))?;
            model.set_reservoir_gain(gain);
            model.set_w_out(DVector::from_vec(r.f64s(dim + n)?))?;
            let params = EsnParams {
                n_neurons: n,
                leak_rate: leak,
                readout_delay,
                ..EsnParams::default()
            };
            AnyEqualizer::Esn(EsnEqualizer {
                params,
                model: Some(model),
                scaler: Some(scaler),
            })
        }
        TAG_FFE => {
            let n_taps = r.u32()?;
            let step_size = r.f64()?;
            let taps = (0..k).map(|_| r.f64s(n_taps)).collect::<Result<Vec<_>>>()?;
            AnyEqualizer::Ffe(FfeEqualizer {
                params: FfeParams {
                    n_taps,
                    step_size,
                    ..FfeParams::default()
                },
                state: Some(FfeState {
                    taps,
                    step_size,
                    sps: FFE_SPS,
                }),
                scaler: Some(scaler),
            })
        }
        TAG_FNN => {
            let h = r.u32()?;
            let d = r.u32()?;
            let window_symbols = r.u32()?;
            let sps = r.u32()?;
            if h == 0 || d != window_symbols * sps * k {
                return Err(malformed("network dimensions disagree with window layout"));
            }
            let w1 = DMatrix::from_row_slice(h, d, &r.f64s(h * d)?);
            let b1 = DVector::from_vec(r.f64s(h)?);
            let w2 = DVector::from_vec(r.f64s(h)?);
            let b2 = r.f64()?;
            AnyEqualizer::Fnn(FnnEqualizer {
                params: FnnParams {
                    hidden_neurons: h,
                    window_symbols,
                    sps,
                    ..FnnParams::default()
                },
                seed: 0,
                model: Some(FnnModel { w1, b1, w2, b2 }),
                scaler: Some(scaler),
            })
        }
        other => return Err(malformed(format!("unknown equalizer tag {other}"))),
    };
    r.finish()?;
    Ok(eq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equalizers::Equalizer;
    use crate::frontend::DetectedChannels;

    fn data() -> (DetectedChannels, Vec<f64>) {
        let n = 600;
        let sps = 8;
        let sym: Vec<f64> = (0..n)
            .map(|i| if (i * 7 + i / 3) % 5 < 2 { 1.0 } else { -1.0 })
            .collect();
        let a: Vec<f64> = (0..n * sps)
            .map(|i| sym[i / sps] + 0.1 * (i as f64).sin())
            .collect();
        let b: Vec<f64> = a.iter().map(|v| 0.5 * v + 0.2).collect();
        (DetectedChannels::new(vec![a, b], 256e9).unwrap(), sym)
    }

    fn round_trip(mut eq: AnyEqualizer) {
        let (rx, sym) = data();
        eq.train(&rx, 8, &sym[..300]).unwrap();
        let blob = eq.to_blob().unwrap();
        assert_eq!(&blob[..4], EQLZ_MAGIC);
        assert_eq!(
            u32::from_le_bytes(blob[4..8].try_into().unwrap()),
            EQLZ_VERSION
        );
        let mut back = AnyEqualizer::from_blob(&blob).unwrap();
        assert_eq!(back.to_blob().unwrap(), blob);
        let a = eq.equalize(&rx, 8).unwrap();
        let b = back.equalize(&rx, 8).unwrap();
        assert_eq!(a, b);
        // Corruption is detected, never a panic.
        assert!(AnyEqualizer::from_blob(&blob[..blob.len() - 1]).is_err());
        let mut bad = blob.clone();
        bad[0] = b'X';
        assert!(AnyEqualizer::from_blob(&bad).is_err());
        let mut bad = blob.clone();
        bad[8] = 9;
        assert!(AnyEqualizer::from_blob(&bad).is_err());
        let mut long = blob;
        long.push(0);
        assert!(AnyEqualizer::from_blob(&long).is_err());
    }

    #[test]
    fn esn_round_trip() {
        round_trip(AnyEqualizer::Esn(EsnEqualizer::new(EsnParams {
            n_neurons: 12,
            washout: 100,
            ..EsnParams::default()
        })));
    }

    #[test]
    fn ffe_round_trip() {
        round_trip(AnyEqualizer::Ffe(FfeEqualizer::new(FfeParams::default())));
    }

    #[test]
    fn fnn_round_trip() {
        round_trip(AnyEqualizer::Fnn(FnnEqualizer::new(
            FnnParams {
                hidden_neurons: 3,
                max_epochs: 2,
                ..FnnParams::default()
            },
            5,
        )));
    }

    #[test]
    fn garbage_is_rejected() {
        assert!(AnyEqualizer::from_blob(b"").is_err());
        assert!(
            AnyEqualizer::from_blob(b"EQLZ\x01\x00\x00\x00\x02\x00\x00\x00\xff\xff\xff\xff")
                .is_err()
        );
    }
}
