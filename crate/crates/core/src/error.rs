use std::fmt;

/// Errors raised anywhere in the toolkit.
///
/// Each variant maps onto one process exit code so the command-line front end
/// can report failures by class (see [`Error::exit_code`]).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("{context}: numerical rank {rank} is below the requested {requested}")]
    Rank {
        context: &'static str,
        rank: usize,
        requested: usize,
    },

    #[error("{context}: singular value gap at index {index} is {gap:.3e} (relative), below {threshold:.1e}")]
    Gap {
        context: &'static str,
        index: usize,
        gap: f64,
        threshold: f64,
    },

    #[error("bound not evaluable: {0}")]
    Assumption(String),

    #[error("basis is not ortho-symplectic: {0}")]
    Structure(String),

    #[error("SVD of a {rows}x{cols} matrix did not converge")]
    NoConvergence { rows: usize, cols: usize },

    #[error("linear solve failed: {0}")]
    Solver(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Process exit codes used by the `symrom` binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(i32)]
pub enum ExitCode {
    Success = 0,
    Argument = 2,
    Rank = 3,
    Gap = 4,
    Assumption = 5,
    Io = 6,
    Numerical = 7,
}

impl fmt::Display for ExitCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", *self as i32)
    }
}

impl Error {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Error::Argument(_) | Error::NonFinite { .. } | Error::Structure(_) => ExitCode::Argument,
            Error::Rank { .. } => ExitCode::Rank,
            Error::Gap { .. } => ExitCode::Gap,
            Error::Assumption(_) => ExitCode::Assumption,
            Error::Io(_) | Error::Format(_) => ExitCode::Io,
            Error::NoConvergence { .. } | Error::Solver(_) => ExitCode::Numerical,
        }
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
