use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: expected degree {expected}, got {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("index {index} out of range for S_{n} (order {order})")]
    Range { index: u64, n: usize, order: u64 },

    #[error("class C^({class}) needs n >= {min_n}, got n = {n}")]
    ClassDomain { class: u8, n: usize, min_n: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("connection element {element} moves fixed point {point} of the scope")]
    ScopeViolation { element: String, point: usize },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("eigenvalue {numerator}/{denominator} of a normal Cayley graph is not an integer")]
    NonIntegralEigenvalue { numerator: i64, denominator: i64 },

    #[error("lanczos did not converge after {iterations} iterations (last residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("size cap exceeded: {what} has {size} > {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
