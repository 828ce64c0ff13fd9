use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A model or measure parameter is outside its domain.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    /// A declarative spec could not be parsed.
    #[error("spec error: {0}")]
    Spec(String),

    /// The operation is not defined for this input (e.g. `h(0+)` of a
    /// measure with infinite mass, Thorin measure of a non-GGC law).
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("mean undefined: {0}")]
    MeanUndefined(String),

    #[error("diversity orders differ ({0} vs {1}); SNR gain is ±∞")]
    UnequalDiversity(f64, f64),

    /// An adaptive quadrature hit its evaluation cap before reaching the
    /// requested tolerance.
    #[error("quadrature did not converge ({what}): estimate {value:e}, error {error:e} after {evals} evaluations")]
    NonConvergence {
        what: String,
        value: f64,
        error: f64,
        evals: usize,
    },

    /// A numerical procedure could not decide between finite and infinite.
    #[error("indeterminate: {0}")]
    Indeterminate(String),

    #[error("non-finite value {value} while evaluating {what} at {at}")]
    NonFinite { what: String, at: f64, value: f64 },

    /// Monte-Carlo data too noisy for the requested estimate.
    #[error("insufficient precision: {0}")]
    Noisy(String),

    #[error("target outside range: {0}")]
    OutOfRange(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::Indeterminate(_) | Error::NonFinite { .. }
        )
    }

    /// True for malformed or out-of-domain input specs.
    pub fn is_spec(&self) -> bool {
        matches!(self, Error::InvalidParameter { .. } | Error::Spec(_))
    }
}
