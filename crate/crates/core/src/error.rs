use thiserror::Error;

/// Errors produced anywhere in the simulation, equalization or harness layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error(
        "synchronization failed: correlation peak is {ratio:.2}x the RMS sidelobe (need >= 3)"
    )]
    SyncFailure { ratio: f64 },

    #[error("training diverged: {0}")]
    TrainingDiverged(String),

    #[error("no echo-state reservoir found after {attempts} draws")]
    NoEchoState { attempts: usize },

    #[error("malformed {what}: {reason}")]
    Format { what: &'static str, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
