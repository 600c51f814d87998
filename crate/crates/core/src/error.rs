use thiserror::Error;

/// Errors raised by the symbolic engine.
///
/// Verdicts (integrable or not, Poisson or not) are ordinary return values;
/// only malformed input, violated preconditions and structural failures of a
/// solver surface as `Error`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("chart mismatch: [{left}] vs [{right}]")]
    ChartMismatch { left: String, right: String },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("underdetermined: {0}")]
    Underdetermined(String),
    #[error("no common theta: form #{failing_index} is incompatible with the preceding forms")]
    NoCommonTheta {
        failing_index: usize,
        /// `dω − θ∧ω` for the failing form, with θ solved from the preceding
        /// forms when that prefix determines it.
        residual: Option<String>,
    },
    #[error("structural failure: {0}")]
    Structural(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
