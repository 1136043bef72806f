use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("excluded exponent: beta = {0} is an even nonnegative integer")]
    ExcludedExponent(f64),

    #[error("invalid shape parameter: c = {0} must be positive")]
    InvalidShape(f64),

    #[error("outside theory coverage: n = {n}, beta = {beta} (need n+beta >= 1 or n+beta = -1)")]
    OutsideCoverage { n: usize, beta: f64 },

    #[error("wrong branch: {0}")]
    WrongBranch(String),

    #[error("fill distance too large for the error theorem: delta = {delta}, admissible maximum {max}")]
    FillDistanceTooLarge { delta: f64, max: f64 },

    #[error("boundary case excluded by the selection rules: {0}")]
    BoundaryCase(String),

    #[error("ill-conditioned: condition ≈ {condition:e}")]
    IllConditioned { condition: f64 },

    #[error("rank deficiency: polynomial block has rank {rank}, expected {expected} (centers not unisolvent)")]
    RankDeficient { rank: usize, expected: usize },

    #[error("quadrature did not converge; best estimate {estimate} (error estimate {error_estimate:e})")]
    NonConvergence { estimate: f64, error_estimate: f64 },

    #[error("invalid center set: {0}")]
    InvalidCenters(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors that stem from the parameter domain or theory
    /// coverage rather than from numerical breakdown.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::ExcludedExponent(_)
                | Error::InvalidShape(_)
                | Error::OutsideCoverage { .. }
                | Error::WrongBranch(_)
                | Error::FillDistanceTooLarge { .. }
                | Error::BoundaryCase(_)
                | Error::InvalidCenters(_)
                | Error::InvalidInput(_)
        )
    }
}
