use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operands live in different polynomial rings ({left:?} vs {right:?})")]
    MixedRings { left: Vec<String>, right: Vec<String> },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("not a polynomial at byte {offset}: {message}")]
    NonPolynomial { offset: usize, message: String },

    #[error("point is not on the variety (residual {residual})")]
    PointNotOnVariety { residual: String },
    #[error("gradient vanishes at the point; use the branch solver instead")]
    SingularPoint,
    #[error("tangent cone does not split into linear forms (residual factor of degree {degree})")]
    NonLinearTangentCone { degree: u32 },
    #[error("no nonvanishing series coefficient up to order {max_order}")]
    OrderExhausted { max_order: u32 },
    #[error("pencil of tangent directions could not be resolved: {0}")]
    PencilUnresolved(String),
    #[error("root finder did not converge after {iterations} iterations (best residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("no real branch found along the requested direction")]
    NoBranch,
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MixedRings { .. } => "MixedRings",
            Error::UnknownVariable(_) => "UnknownVariable",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::Syntax { .. } => "SyntaxError",
            Error::NonPolynomial { .. } => "NonPolynomial",
            Error::PointNotOnVariety { .. } => "PointNotOnVariety",
            Error::SingularPoint => "SingularPoint",
            Error::NonLinearTangentCone { .. } => "NonLinearTangentCone",
            Error::OrderExhausted { .. } => "OrderExhausted",
            Error::PencilUnresolved(_) => "PencilUnresolved",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::NoBranch => "NoBranch",
            Error::InsufficientSamples { .. } => "InsufficientSamples",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }

    /// True for errors caused by the caller's input rather than by a solver
    /// giving up.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::MixedRings { .. }
                | Error::UnknownVariable(_)
                | Error::ZeroPolynomial
                | Error::ArityMismatch { .. }
                | Error::Syntax { .. }
                | Error::NonPolynomial { .. }
                | Error::PointNotOnVariety { .. }
                | Error::SingularPoint
                | Error::InvalidInput(_)
        )
    }
}
