use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("smoothness order beta={0} must be finite and >= 2")]
    InvalidBeta(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("perturbation radius h={0} is below the minimum of {min}", min = crate::estimator::MIN_RADIUS)]
    RadiusTooSmall(f64),

    #[error("oracle returned a non-finite value ({value}) on the {side} query")]
    NonFiniteOracle { value: f64, side: &'static str },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("round {round} out of range 1..={horizon}")]
    RoundOutOfRange { round: usize, horizon: usize },

    #[error("iterate diverged at round {round} (norm {norm:e})")]
    Diverged { round: usize, norm: f64 },

    #[error("starting point lies outside the feasible set")]
    InfeasibleStart,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("unknown objective id `{0}`")]
    UnknownObjective(String),

    #[error("objective `{0}` has no certificate of that kind")]
    NotCertifiable(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
