use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CosError {
    /// The series hit `max_terms` before its certified tail dropped below tolerance.
    #[error("series did not converge within {max_terms} terms (last tail bound {tail_bound})")]
    NonConvergence { max_terms: usize, tail_bound: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid evaluation config: {0}")]
    InvalidConfig(String),

    /// Recurrence and series disagree beyond their combined error bounds.
    #[error("ladder at x = {point} disagrees with the series at order {order}")]
    LadderMismatch { order: usize, point: String },

    #[error("|Cos'({point})| exceeds the envelope 1/(2 sqrt x)")]
    EnvelopeViolated { point: String },
}

pub type Result<T, E = CosError> = std::result::Result<T, E>;
