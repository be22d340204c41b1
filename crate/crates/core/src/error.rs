use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A simulation configuration violated one of its invariants.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An index pointed outside a channel tensor or allocation.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// Realization, assignment, and power allocation sizes disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A cost matrix was not square or carried non-finite entries.
    #[error("malformed cost matrix: {0}")]
    BadCostMatrix(String),

    /// Exhaustive joint search requested above the factorial guard rail.
    #[error("exhaustive search over {n} sub-channels exceeds the guard rail of {max}")]
    ExhaustiveGuard { n: usize, max: usize },

    /// The Dinkelbach loop hit its iteration cap without meeting the tolerance.
    #[error("fractional solve did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
