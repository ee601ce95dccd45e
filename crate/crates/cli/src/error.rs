use thiserror::Error;

/// Exit status for usage, parse and input errors.
pub const EXIT_USAGE: i32 = 1;
/// Exit status when a well-formed problem cannot be solved.
pub const EXIT_SOLVE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown family `{name}` at {position}")]
    UnknownFamily { name: String, position: usize },

    #[error("cannot access {path}: {message}")]
    Io { path: String, message: String },

    #[error("malformed line {line}: `{content}`")]
    MalformedLine { line: usize, content: String },

    /// Rejected while reading or validating the input.
    #[error("{0}")]
    Input(hermix_core::Error),

    /// Raised by the solver on a well-formed problem.
    #[error("{0}")]
    Solve(hermix_core::Error),

    #[error("no simplex-feasible candidate")]
    NoFeasibleCandidate,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solve(_) | CliError::NoFeasibleCandidate => EXIT_SOLVE,
            _ => EXIT_USAGE,
        }
    }

    /// Stable machine-readable identifier.
    pub fn kind(&self) -> &'static str {
        use hermix_core::Error as E;
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse { .. } => "parse_error",
            CliError::UnknownFamily { .. } => "unknown_family",
            CliError::Io { .. } => "io_error",
            CliError::MalformedLine { .. } => "malformed_line",
            CliError::NoFeasibleCandidate => "infeasible",
            CliError::Input(e) | CliError::Solve(e) => match e {
                E::OrderTooLarge { .. } => "order_too_large",
                E::EmptyInput(_) => "empty_input",
                E::EmptySample => "empty_sample",
                E::MomentNotFinite { .. } => "moment_not_finite",
                E::InvalidParameter(_) => "invalid_parameter",
                E::NonPolynomialParameter { .. } => "non_polynomial_parameter",
                E::DuplicateUnknown(_) => "duplicate_unknown",
                E::InsufficientMoments { .. } => "insufficient_moments",
                E::RingMismatch => "ring_mismatch",
                E::BasisMismatch => "basis_mismatch",
                E::NotZeroDimensional { .. } => "not_zero_dimensional",
                E::NotMonic => "not_monic",
                E::NotUnivariate => "not_univariate",
                E::NoConvergence { .. } => "no_convergence",
                E::SeparationFailure { .. } => "separation_failure",
                E::Underdetermined { .. } => "underdetermined",
                E::Overdetermined { .. } => "overdetermined",
                E::RankDeficient { .. } => "rank_deficient",
                E::InfeasibleWeights(_) => "infeasible_weights",
                E::Parse { .. } => "parse_error",
            },
        }
    }
}

impl CliError {
    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), message: err.to_string() }
    }
}
