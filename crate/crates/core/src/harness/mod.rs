//! Experiment orchestration: link simulation, sweeps over distance,
//! receiver, equalizer and OSNR, and result emission.

pub mod canned;
pub mod config;
pub mod emit;
pub mod link;
pub mod point;
pub mod selftest;
pub mod sweep;

pub use config::{EqualizerKind, EqualizerSpec, ExperimentConfig};
pub use emit::{emit, Format};
pub use link::{simulate_link, LinkOutput, LinkParams, Receiver};
pub use sweep::{run_sweep, RecordKind, ResultRecord, Runner, SweepPoint};
