use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum PnError {
    /// A step function violated a structural invariant (ordering, range,
    /// left-continuity bookkeeping).
    #[error("invalid distribution function: {0}")]
    InvalidDistFn(String),

    /// Text-format input (DF/TN files, space specs) failed to parse.
    /// `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An argument was outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Vectors from different carriers (or of different lengths) were mixed.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A grid-sampled t-norm table failed its law checks.
    #[error("invalid t-norm table: {0}")]
    InvalidTNormTable(String),

    /// A space constructor was handed triangle functions that fail the
    /// construction's sampled preconditions.
    #[error("incompatible triangle functions: {0}")]
    IncompatibleTriangleFns(String),

    /// A sampling schedule ran out of budget before its convergence rule
    /// fired. Never silently truncated into a value.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = PnError> = std::result::Result<T, E>;
