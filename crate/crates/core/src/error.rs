use thiserror::Error;

pub use crate::oracle::Method1Estimate;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("{op} did not converge after {iterations} iterations")]
    NonConvergence { op: &'static str, iterations: usize },

    #[error("coefficient a_{index} is not a pure multiple of sqrt(2)")]
    ParityViolation { index: usize },

    #[error("precision {digits} digits is below the minimum of {min}")]
    PrecisionTooLow { digits: u32, min: u32 },

    #[error(
        "method I estimate for a_{} did not stabilize ({} agreeing digits)",
        .0.n, .0.stabilized_digits
    )]
    Unstabilized(Box<Method1Estimate>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}
