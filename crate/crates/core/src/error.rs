use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The lattice Π(m) would be larger than the configured cap allows.
    #[error("partition lattice of order {m} has Bell({m}) = {bell} elements, above the cap m <= {cap}")]
    Size { m: usize, bell: String, cap: usize },

    #[error("order must be positive")]
    EmptyOrder,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    /// Too few samples for the requested estimator or step size.
    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("variable index {label} out of range for d = {d}")]
    LabelOutOfRange { label: usize, d: usize },

    #[error("moment table has no entry for block {0}")]
    MissingMoment(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("functional failed on replica {replica}: {message}")]
    Functional { replica: usize, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
