//! Crate-wide error type and CLI exit-code mapping.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DarcError {
    /// A numerical operation produced NaN or Inf (solver blow-up, diverged
    /// surrogate). Callers abort the episode.
    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    /// Readout applied before `train_readout`.
    #[error("reservoir readout is untrained")]
    Untrained,

    /// Generated recurrent matrix has zero spectral radius; retry with the
    /// next seed.
    #[error("degenerate recurrent matrix (zero spectral radius) for seed {seed}")]
    DegenerateMatrix { seed: u64 },

    /// Too few usable rows after washout to solve the ridge problem.
    #[error("insufficient training data: {usable} usable rows after washout")]
    InsufficientData { usable: usize },

    /// Innovation covariance not invertible during the analysis step.
    #[error("singular innovation covariance in EnKF analysis")]
    SingularInnovation,

    /// Inconsistent dimensions passed to a dense-network operation.
    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },

    /// Replay buffer holds fewer transitions than one batch.
    #[error("replay buffer too small: {size} < batch {batch}")]
    BufferTooSmall { size: usize, batch: usize },

    /// A subcommand prerequisite (checkpoint, dataset) is not on disk.
    #[error("missing artifact: {path}")]
    MissingArtifact { path: String },

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("config validation error at `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, DarcError>;

impl DarcError {
    pub fn non_finite(context: impl Into<String>) -> Self {
        DarcError::NonFinite {
            context: context.into(),
        }
    }

    pub fn shape(context: impl Into<String>) -> Self {
        DarcError::ShapeMismatch {
            context: context.into(),
        }
    }

    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        DarcError::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Stable process exit codes: 0 ok, 2 config, 3 missing artifact,
    /// 4 numerical failure, 1 everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            DarcError::Parse(_) | DarcError::Validation { .. } => 2,
            DarcError::MissingArtifact { .. } => 3,
            DarcError::NonFinite { .. }
            | DarcError::DegenerateMatrix { .. }
            | DarcError::SingularInnovation
            | DarcError::InsufficientData { .. } => 4,
            _ => 1,
        }
    }
}

impl From<serde_json::Error> for DarcError {
    fn from(e: serde_json::Error) -> Self {
        DarcError::Serde(e.to_string())
    }
}

impl From<csv::Error> for DarcError {
    fn from(e: csv::Error) -> Self {
        DarcError::Serde(e.to_string())
    }
}
