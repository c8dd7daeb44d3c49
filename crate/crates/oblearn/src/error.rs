use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid belief: {0}")]
    InvalidBelief(String),

    #[error("invalid state space: {0}")]
    InvalidStateSpace(String),

    #[error("invalid utility table: {0}")]
    InvalidUtility(String),

    #[error("belief and utility/model live on different state spaces")]
    SpaceMismatch,

    #[error("unknown action: {0}")]
    UnknownAction(String),

    #[error("invalid signal model: {0}")]
    InvalidSignalModel(String),

    #[error("posterior system is not Bayes-plausible: {0}")]
    NotBayesPlausible(String),

    #[error("signal {0} is outside the model's signal domain")]
    OutOfDomainSignal(f64),

    #[error("operation unsupported for this backend: {0}")]
    Unsupported(String),

    #[error("partition has {0} thresholds (limit 64); model looks mis-specified")]
    PathologicalPartition(usize),

    #[error("action {0} has zero probability under this partition")]
    OffPathAction(String),

    #[error("signal sets are not a partition of the signal domain: {0}")]
    BadPartition(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown scenario: {0}")]
    UnknownScenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
