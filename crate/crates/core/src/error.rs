use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied arguments that violate an operation's preconditions.
    #[error("invalid input: {0}")]
    Input(String),

    /// A Hamiltonian file does not match the expected schema.
    #[error("hamiltonian file: {message}")]
    Parse {
        message: String,
        /// Index of the offending entry in `terms`, when the error is term-local.
        term: Option<usize>,
    },

    /// A numerical invariant broke, e.g. an expectation value with a large
    /// imaginary part (non-Hermitian operator).
    #[error("internal error: {0}")]
    Internal(String),

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("objective returned a non-finite value at iteration {iteration}")]
    NonFinite { iteration: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
