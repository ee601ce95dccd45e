use thiserror::Error;

/// Errors raised anywhere in the fitting pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Hermite order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("{0} must not be empty")]
    EmptyInput(&'static str),

    #[error("empty sample")]
    EmptySample,

    #[error("moment of order {order} is not finite for {family}")]
    MomentNotFinite { family: String, order: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parameter `{param}` of {family} must be fixed: its moments are not polynomial in it")]
    NonPolynomialParameter { family: String, param: String },

    #[error("unknown `{0}` is declared more than once")]
    DuplicateUnknown(String),

    #[error("{needed} moments requested but only {available} available")]
    InsufficientMoments { needed: usize, available: usize },

    #[error("polynomials belong to different rings")]
    RingMismatch,

    #[error("basis does not belong to the given Groebner basis")]
    BasisMismatch,

    #[error("ideal is not zero-dimensional: no leading term is a pure power of `{variable}`")]
    NotZeroDimensional { variable: String },

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("polynomial is not univariate of degree >= 1")]
    NotUnivariate,

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("random linear form failed to separate the solutions after {attempts} attempts")]
    SeparationFailure { attempts: usize },

    #[error("{unknowns} unknowns but only {equations} moment equations")]
    Underdetermined { unknowns: usize, equations: usize },

    #[error(
        "polynomial system has {equations} equations in {unknowns} unknowns; lower the moment order to {unknowns}"
    )]
    Overdetermined { unknowns: usize, equations: usize },

    #[error("component moment vectors are linearly dependent (components {components:?})")]
    RankDeficient { components: Vec<usize> },

    #[error("infeasible weights: {0}")]
    InfeasibleWeights(String),

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
