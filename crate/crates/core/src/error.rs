use thiserror::Error;

/// Errors surfaced by state, operator and experiment construction.
#[derive(Debug, Error)]
pub enum Error {
    #[error("space too large: total dimension {requested} exceeds configured max {max}")]
    SpaceTooLarge { requested: usize, max: usize },

    #[error("degenerate partition: {0}")]
    DegeneratePartition(String),

    #[error("spectral failure: eigensolver did not converge for dimension {dim}")]
    SpectralFailure { dim: usize },

    #[error("clock too small: dimension {0} is below the minimum of 2")]
    ClockTooSmall(usize),

    #[error("degenerate envelope: all envelope amplitudes underflow to zero")]
    DegenerateEnvelope,

    #[error("incompatible spec: {0}")]
    IncompatibleSpec(String),

    #[error("unresolvable energy: level {level} outside clock band 0..={band}")]
    UnresolvableEnergy { level: i64, band: usize },

    #[error("empty history: weights and seed produce a zero-norm state")]
    EmptyHistory,

    #[error("invalid repartition: transformation deviates from unitarity by {defect:.3e}")]
    InvalidRepartition { defect: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid factor dimension: every factor must be at least 2, got {0}")]
    InvalidFactorDim(usize),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
