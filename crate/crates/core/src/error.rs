use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Each variant maps onto one row of the CLI exit-code table, see
/// [`Error::exit_code`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate map: {0}")]
    DegenerateMap(String),

    #[error("degenerate fiber at t = {0}")]
    DegenerateFiber(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("root finder did not converge after {iterations} iterations (degree {degree})")]
    NoConvergence { degree: usize, iterations: usize },

    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("exceptional start point: its total preimage is itself")]
    ExceptionalStart,

    #[error("projection {0} of the curve is not dominant")]
    NonDominant(u8),

    #[error("divisor has degree {0}, expected 0")]
    DegreeNonZero(i64),

    #[error("curve is weakly special: {0}")]
    SpecialCurve(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code: 2 input degeneracy, 3 budget, 4 numeric failure,
    /// 1 for anything else (bad input files, i/o).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DegenerateMap(_)
            | Error::DegenerateFiber(_)
            | Error::ExceptionalStart
            | Error::NonDominant(_)
            | Error::DegreeNonZero(_)
            | Error::SpecialCurve(_) => 2,
            Error::BudgetExceeded(_) => 3,
            Error::NoConvergence { .. } | Error::InsufficientSamples { .. } => 4,
            Error::InvalidInput(_) | Error::Io(_) => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
