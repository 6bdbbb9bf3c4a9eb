use thiserror::Error;

use crate::convex::lp::LpError;

/// Errors raised by geometric and analytic operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("direction must be nonzero")]
    ZeroDirection,

    #[error("input contains NaN or infinite values")]
    NonFinite,

    #[error("degenerate body: {0}")]
    Degenerate(String),

    #[error("body is unbounded")]
    Unbounded,

    #[error("body has empty interior")]
    EmptyInterior,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported representation: {0}")]
    Unsupported(String),

    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),

    #[error("schema error at line {line}, column {column}: {message}")]
    Schema {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Lp(#[from] LpError),
}

impl Error {
    /// Short machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ZeroDirection => "zero_direction",
            Error::NonFinite => "non_finite",
            Error::Degenerate(_) => "degenerate",
            Error::Unbounded => "unbounded",
            Error::EmptyInterior => "empty_interior",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Unsupported(_) => "unsupported",
            Error::NonConvergence(_) => "non_convergence",
            Error::Schema { .. } => "schema",
            Error::Lp(LpError::IllConditioned { .. }) => "lp_ill_conditioned",
            Error::Lp(LpError::IterationLimit(_)) => "lp_iteration_limit",
            Error::Lp(_) => "lp_input",
        }
    }

    /// True for failures of a numerical procedure rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence(_)
                | Error::Lp(LpError::IllConditioned { .. })
                | Error::Lp(LpError::IterationLimit(_))
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
