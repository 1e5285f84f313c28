use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state vector is not normalized (norm = {norm})")]
    Normalization { norm: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("basis is not orthonormal: {0}")]
    InvalidBasis(String),

    #[error("Kraus operators are not complete (max deviation from identity {deviation:e})")]
    Kraus { deviation: f64 },

    #[error("marginal has residual imaginary part {residual:e}")]
    Marginal { residual: f64 },

    #[error("basis overlap |<mu|nu>| = {overlap:e} too small for reconstruction")]
    Overlap { overlap: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    Param { name: String, reason: String },

    #[error("quadrature did not converge on [{a}, {b}] (error estimate {estimate:e})")]
    Integration { a: f64, b: f64, estimate: f64 },

    #[error("step size too large: h*kappa = {product} exceeds 0.5")]
    StepSize { product: f64 },

    #[error("map is not a valid CPTP map: {0}")]
    Map(String),
}

impl Error {
    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::Param {
            name: name.to_string(),
            reason: reason.into(),
        }
    }

    /// True for failures of a numerical routine (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Integration { .. } | Error::StepSize { .. })
    }
}
