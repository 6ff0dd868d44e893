//! Built-in sweeps for the three studies: receiver comparison versus reach,
//! slice subsets, and reservoir size.

use crate::error::{Error, Result};

use super::config::ExperimentConfig;

pub const FIG3A: &str = include_str!("../../configs/fig3a.toml");
pub const FIG3B: &str = include_str!("../../configs/fig3b.toml");
pub const FIG3C: &str = include_str!("../../configs/fig3c.toml");

pub const NAMES: [&str; 3] = ["fig3a", "fig3b", "fig3c"];

/// TOML text of a built-in sweep.
pub fn text(name: &str) -> Option<&'static str> {
    match name {
        "fig3a" => Some(FIG3A),
        "fig3b" => Some(FIG3B),
        "fig3c" => Some(FIG3C),
        _ => None,
    }
}

pub fn config(name: &str, overrides: &[String]) -> Result<ExperimentConfig> {
    let t = text(name).ok_or_else(|| Error::Config(format!("no built-in sweep named {name:?}")))?;
    ExperimentConfig::from_toml_with_overrides(t, overrides)
}
