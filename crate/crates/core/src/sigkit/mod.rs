//! Waveform primitives: bit and symbol generation, RRC pulse shaping,
//! frequency-domain filtering and rational resampling.
//!
//! All signals are treated as one period of a periodic sequence. Shaping,
//! filtering and resampling are circular, so the whole transmit/receive
//! chain composes without edge transients.

mod bits;
mod cwav;
mod pulse;
mod resample;
mod spectral;
mod waveform;

pub use bits::{generate_bits, BitSequence, SymbolSequence};
pub use cwav::{read_cwav, write_cwav, CWAV_VERSION};
pub use pulse::{rrc_taps, shape_symbols, FirFilter, DEFAULT_RRC_SPAN};
pub use resample::{rational_ratio, resample, resample_real, MAX_RATIO_DENOMINATOR};
pub(crate) use spectral::{fft, ifft};
pub use spectral::{fft_frequencies, freq_filter, freq_filter_real, periodogram, spectrum};
pub use waveform::{ComplexWaveform, RealWaveform};

pub use num_complex::Complex64;
