use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// The integer is not 1 and not a fundamental discriminant.
    #[error("{0} is not a fundamental discriminant")]
    NonFundamentalDiscriminant(i64),

    /// A size or cap was exceeded (discriminant bound, sieve memory budget).
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),

    /// A quadratic-field operation was applied to the base field.
    #[error("operation requires a quadratic field, got degree 1")]
    NotQuadratic,

    /// An argument left the domain of a table or function.
    #[error("argument out of range: {0}")]
    OutOfRange(String),

    /// Requested precision is below the supported minimum.
    #[error("precision too low: {got} bits (minimum {min})")]
    PrecisionTooLow { got: usize, min: usize },

    /// Coefficient index beyond the supported cap.
    #[error("index {got} exceeds cap {cap}")]
    IndexTooLarge { got: usize, cap: usize },

    /// Evaluation requested exactly at the pole s = 1.
    #[error("zeta_K has a pole at s = 1")]
    PoleAt1,

    /// Argument outside the supported real interval.
    #[error("domain error: {0}")]
    DomainError(String),

    /// Supplied field invariants contradict the field descriptor.
    #[error("inconsistent invariants: {0}")]
    InconsistentInvariants(String),

    /// Limit extrapolation needs at least four checkpoints.
    #[error("too few checkpoints: {0} (minimum 4)")]
    TooFewCheckpoints(usize),

    /// Supplied residue disagrees with the ideal-count drift of the table.
    #[error("residue {supplied} disagrees with table drift {observed} by more than 10%")]
    ResidueMismatch { supplied: f64, observed: f64 },

    /// I/O failure while reading or writing a count cache.
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),

    /// A cache file exists but is not a valid count dump.
    #[error("invalid cache file: {0}")]
    BadCacheFile(String),

    /// A decimal string could not be parsed as a number.
    #[error("invalid number: {0}")]
    BadNumber(String),
}

pub type Result<T> = std::result::Result<T, Error>;
