use thiserror::Error;

/// Error conditions surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine failed to converge or produced a non-finite
    /// or contract-violating result.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// The constrained problem admits no feasible policy.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Invalid model or run configuration.
    #[error("config error: {0}")]
    Config(String),

    /// A model/operation combination that is deliberately not supported.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
