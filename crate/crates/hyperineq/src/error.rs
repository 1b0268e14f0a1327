use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("density is not integrable: {0}")]
    NonIntegrable(String),
    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),
    #[error("argument outside the admissible domain: {0}")]
    DomainError(String),
    #[error("function is not convex: {0}")]
    ConvexityViolation(String),
    #[error("normalization failed: {0}")]
    NormalizationFailure(String),
    #[error("entropy integrand is singular at zero: {0}")]
    SingularAtZero(String),
    #[error("growth condition violated: {0}")]
    ConditionViolated(String),
    #[error("no finite scaling brackets the gauge norm: {0}")]
    Unbounded(String),
    #[error("supremum diverges: {0}")]
    UnboundedSupremum(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("sandwich bound violated: {0}")]
    SandwichViolation(String),
    #[error("rothaus mode requires an explicit Rothaus constant")]
    MissingRothausConstant,
    #[error("curvature 4F'(1)+2F''(1) is not positive: {0}")]
    NonpositiveCurvature(String),
    #[error("step control underflowed: {0}")]
    StiffnessFailure(String),
    #[error("time step too coarse: {0}")]
    StepTooCoarse(String),
    #[error("state space is disconnected: {0}")]
    Disconnected(String),
    #[error("measure is not log-concave: {0}")]
    NotLogConcave(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures meaning a mathematical hypothesis does not hold,
    /// as opposed to bad input or numerical breakdown.
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            Error::ConvexityViolation(_)
                | Error::ConditionViolated(_)
                | Error::UnboundedSupremum(_)
                | Error::HypothesisViolation(_)
                | Error::SandwichViolation(_)
                | Error::NonpositiveCurvature(_)
                | Error::NotLogConcave(_)
                | Error::NonIntegrable(_)
                | Error::SingularAtZero(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
