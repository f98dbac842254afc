use thiserror::Error;

/// Errors produced by the analytic, optimization and simulation engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge after {iterations} terms (last term {last_term:e})")]
    NonConvergence { iterations: usize, last_term: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cell-load pmf truncation lost {residual:e} of probability mass at m_max = {m_max}")]
    Truncation { residual: f64, m_max: usize },

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("degenerate snapshot: {0}")]
    Degenerate(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),
}

impl Error {
    /// True for errors caused by an invalid user-provided configuration, as
    /// opposed to a numeric failure during evaluation.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Unsupported(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
