use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("code construction failed: {0}")]
    ConstructionFailure(String),

    #[error("checkpoint violation after pulse {pulse_index}: deviation {deviation:.3e}")]
    CheckpointViolation { pulse_index: usize, deviation: f64 },

    #[error("pulse synthesis failed: checkpoint {checkpoint} is unreachable")]
    SynthesisFailure { checkpoint: usize },

    #[error("error operator annihilates the state")]
    DegenerateError,

    #[error("measurement outcome {outcome} has probability {probability:.3e}")]
    DegenerateMeasurement { outcome: u8, probability: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
