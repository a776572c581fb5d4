use thiserror::Error;

/// Domain errors raised by the library. Each variant has a stable name
/// (see [`Error::name`]) which the CLI prints on standard error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("linear coefficient of the reduced equation is {eps1}, must be positive")]
    NonPositiveLinearCoefficient { eps1: f64 },

    #[error("closed-form frequency supports order 1 or 2, got {0}")]
    UnsupportedOrder(u32),

    #[error("isochronicity quadratic has negative discriminant {0}")]
    NoRealRoot(f64),

    #[error("cos T coefficient of the right-hand side is nonzero: {0}")]
    ResidualSecularity(String),

    #[error("expansion order {order} exceeds cap {cap}")]
    OrderCapExceeded { order: u32, cap: u32 },

    #[error("motion left the bounded region at tau = {tau}")]
    UnboundedMotion { tau: f64 },

    #[error("only {found} full cycles in trajectory, need at least {needed}")]
    InsufficientCycles { found: usize, needed: usize },

    #[error("{0}")]
    DomainError(String),

    #[error("tanh argument {0} is outside [0, 1)")]
    ArgumentOutOfRange(f64),

    #[error("truncated b = {0} is not positive")]
    NegativeTruncatedB(f64),

    #[error("amplitude squared {a2} exceeds turning point {k_plus}")]
    AmplitudeBeyondTurningPoint { a2: f64, k_plus: f64 },

    #[error("quadrature did not converge (estimated error {0})")]
    QuadratureFailure(f64),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::NonPositiveLinearCoefficient { .. } => "NonPositiveLinearCoefficient",
            Error::UnsupportedOrder(_) => "UnsupportedOrder",
            Error::NoRealRoot(_) => "NoRealRoot",
            Error::ResidualSecularity(_) => "ResidualSecularity",
            Error::OrderCapExceeded { .. } => "OrderCapExceeded",
            Error::UnboundedMotion { .. } => "UnboundedMotion",
            Error::InsufficientCycles { .. } => "InsufficientCycles",
            Error::DomainError(_) => "DomainError",
            Error::ArgumentOutOfRange(_) => "ArgumentOutOfRange",
            Error::NegativeTruncatedB(_) => "NegativeTruncatedB",
            Error::AmplitudeBeyondTurningPoint { .. } => "AmplitudeBeyondTurningPoint",
            Error::QuadratureFailure(_) => "QuadratureFailure",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
