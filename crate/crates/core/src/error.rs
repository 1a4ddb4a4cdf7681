use thiserror::Error;

use crate::closedform::BranchLabel;

/// Every failure mode of the library.
///
/// The variants carry enough context for a caller to explain what went wrong
/// without re-deriving it (the no-solution variant, for instance, carries
/// both existence thresholds).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error(
        "no {branch} stationary state at omega = {omega}: the tilde branch needs omega > {omega_star}, \
         the hat branch needs omega > {omega_dstar}"
    )]
    NoSolution {
        branch: BranchLabel,
        omega: f64,
        omega_star: f64,
        omega_dstar: f64,
    },

    #[error("grid half-width {available} is too narrow, need at least {required}")]
    Truncation { required: f64, available: f64 },

    #[error("the Nehari scale is undefined for the zero field")]
    UndefinedScale,

    #[error("quadratic form is not positive ({numerator}); omega is at or below the linear threshold")]
    CoercivityViolated { numerator: f64 },

    #[error("admissible coercivity interval is empty at omega = {omega} (threshold {omega_star})")]
    EmptyInterval { omega: f64, omega_star: f64 },

    #[error(
        "omega = {omega} is within 5 difference steps ({step}) of the threshold {omega_star}; use a smaller step"
    )]
    ThresholdProximity {
        omega: f64,
        omega_star: f64,
        step: f64,
    },

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    EigenNonConvergence { iterations: usize },

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error("invalid evolution config: {0}")]
    InvalidConfig(String),

    #[error("field is not in the energy space: jump residual {residual}")]
    NotInEnergySpace { residual: f64 },
}

impl Error {
    /// Short machine-readable tag, used in error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid-parameter",
            Error::InvalidGrid(_) => "invalid-grid",
            Error::NoSolution { .. } => "no-solution",
            Error::Truncation { .. } => "truncation",
            Error::UndefinedScale => "undefined-scale",
            Error::CoercivityViolated { .. } => "coercivity-violated",
            Error::EmptyInterval { .. } => "empty-interval",
            Error::ThresholdProximity { .. } => "threshold-proximity",
            Error::EigenNonConvergence { .. } => "eigen-non-convergence",
            Error::LinearSolve(_) => "linear-solve",
            Error::InvalidConfig(_) => "invalid-config",
            Error::NotInEnergySpace { .. } => "not-in-energy-space",
        }
    }

    /// True for errors caused by bad user input rather than numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. } | Error::InvalidGrid(_) | Error::InvalidConfig(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
