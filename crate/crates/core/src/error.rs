use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `a² < |b|² + 1/4`, or a two-mode matrix with a symplectic eigenvalue below 1/2.
    #[error("unphysical state: {0}")]
    UnphysicalState(String),

    #[error("invalid covariance: {0}")]
    InvalidCovariance(String),

    #[error("invalid beam-splitter parameters: {0}")]
    InvalidParams(String),

    #[error("degenerate eigenvalue: {0}")]
    DegenerateEigenvalue(String),

    /// `λ₁min = λ₂min`, where `𝒞` is undefined.
    #[error("degenerate case: {0}")]
    DegenerateCase(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
}
