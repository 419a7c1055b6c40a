use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("direction is at the north pole (|1 - theta_d| = {0:e})")]
    NorthPoleSingularity(f64),
    #[error("kernel evaluated at singular argument z = {0}")]
    SingularArgument(f64),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("field does not vanish at the grid boundary: boundary/max = {ratio:e}")]
    BoundaryLeakage { ratio: f64 },
    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),
    #[error("stability violation: {0}")]
    StabilityViolation(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("unknown initial-data kind `{0}`")]
    UnknownKind(String),
    #[error("study failed: {0}")]
    NonMonotoneConvergence(String),
    #[error("decay window too short: {0} ladder points after the transient")]
    WindowTooShort(usize),
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(msg: impl Into<String>) -> Error {
    Error::ParameterOutOfRange(msg.into())
}
