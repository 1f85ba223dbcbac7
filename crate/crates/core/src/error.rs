use thiserror::Error;

/// Errors raised by the model layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// An operation received an argument outside its mathematical domain.
    #[error("{op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// A parameter set violates one of the model constraints.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

impl ModelError {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        ModelError::Domain {
            op,
            msg: msg.into(),
        }
    }
}

/// Errors raised by crash detection, summaries and sweeps.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("{0}")]
    Domain(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("unknown statistic field `{0}` (expected one of: {fields})", fields = crate::analysis::StatField::NAMES.join(", "))]
    UnknownField(String),

    #[error("every sweep cell failed; first error: {0}")]
    SweepFailed(String),

    #[error(transparent)]
    Model(#[from] ModelError),
}
