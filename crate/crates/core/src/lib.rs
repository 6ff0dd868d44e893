//! Simulator and equalizers for short-reach intensity-modulated,
//! direct-detection optical links with a spectrally sliced receiver.
//!
//! The transmit chain shapes OOK symbols with an RRC filter and drives a
//! quadrature-biased Mach-Zehnder modulator. The field then propagates
//! through dispersive fiber and is amplified to a target OSNR. At the
//! receiver an optical filter bank cuts the spectrum into up to four slices,
//! each detected by its own photodiode. Three equalizers (an echo state
//! network, an LMS feedforward equalizer and a small feedforward network
//! trained by Levenberg-Marquardt) map the detected channels back to
//! symbols, and the harness sweeps distance, slicing, reservoir size and
//! OSNR to produce BER tables.

// `!(x > 0.0)` style checks are kept so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod equalizers;
pub mod error;
pub mod frontend;
pub mod harness;
pub mod metrics;
pub mod rng;
pub mod sigkit;

pub use error::{Error, Result};
