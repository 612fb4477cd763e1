//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Query outside a sampled grid.
    #[error("range error: {0}")]
    Range(String),

    /// Parameters rejected by the admissibility conditions. The message names
    /// the inequality that failed.
    #[error("inadmissible parameters: {0}")]
    Params(String),

    /// Inconsistent or missing configuration (e.g. perturbed solve without a
    /// background profile).
    #[error("configuration error: {0}")]
    Config(String),

    /// Amplitude scan found no sign-change bracket.
    #[error("bracket error: {0}")]
    Bracket(String),

    /// Trajectory tail fits neither decay rate; a longer horizon is needed.
    #[error("horizon error: {0}")]
    Horizon(String),

    /// Adaptive step size collapsed below the minimum.
    #[error("stiffness error: {0}")]
    Stiffness(String),

    /// Requested more eigenvalues than the matrix holds.
    #[error("size error: {0}")]
    Size(String),

    /// Eigenvalue not isolated; inverse iteration cannot proceed.
    #[error("degenerate eigenvalue: {0}")]
    Degenerate(String),

    /// Near-zero eigenvalue inside the ambiguity window where the theory
    /// demands a definite sign.
    #[error("unresolved near-zero eigenvalue: {0}")]
    Unresolved(String),

    /// Grid too coarse for the requested discretization.
    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
