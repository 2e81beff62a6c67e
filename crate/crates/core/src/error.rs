use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Validation problems (bad parameters, points outside a domain) are kept
/// apart from numerical failures so callers can map them to different exit
/// statuses.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {t} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },

    /// A warping function vanished or went negative. This marks the edge of
    /// the region where the warped metric is defined.
    #[error("profile value {value} at t = {t} is not positive (domain edge)")]
    NonPositive { t: f64, value: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("integration step underflow at t = {t} (step {step:e}) before the divergence threshold")]
    StepUnderflow { t: f64, step: f64 },

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// `true` for failures of a numerical method rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::StepUnderflow { .. } | Error::Numerical(_))
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
