use thiserror::Error;

/// Crate-wide error type.
///
/// Validation-class variants (`Parse`, `Validation`, `NotBalanced`, `SizeLimit`,
/// `Precondition`) mean the input or the request was rejected; the remaining
/// variants signal a numerical failure on input that passed validation.
#[derive(Debug, Error)]
pub enum Error {
    /// Input file or string is not well formed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Input is well formed but violates a graph invariant.
    #[error("invalid graph: {0}")]
    Validation(String),

    /// A pivot fell below the singularity threshold during factorization.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// A numerical precondition failed on data that passed validation.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Iteration budget exhausted before the tolerance was met.
    #[error("no convergence after {iterations} iterations, residual {residual:.3e}")]
    NoConvergence { iterations: usize, residual: f64 },

    /// Operation requires in-weights to match out-weights at every vertex.
    #[error("graph is not balanced: {0}")]
    NotBalanced(String),

    /// Exhaustive enumeration refused above the size cap.
    #[error("graph too large for exhaustive enumeration: n = {n} exceeds cap {cap}")]
    SizeLimit { n: usize, cap: usize },

    /// Caller violated a documented call contract.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Independent construction routes disagree beyond tolerance.
    #[error("construction routes disagree: max deviation {max_dev:.3e} exceeds {tol:.3e}")]
    RouteDisagreement { max_dev: f64, tol: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that reject the input or request rather than report an
    /// internal numerical failure. The command line maps these to exit code 2.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::Validation(_)
                | Error::NotBalanced(_)
                | Error::SizeLimit { .. }
                | Error::Precondition(_)
        )
    }
}
