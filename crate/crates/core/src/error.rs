use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaError {
    #[error("grade {0} out of range 0..=3")]
    GradeOutOfRange(usize),
    #[error("expected a pure bivector")]
    NotBivector,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DyadicError {
    #[error("nonion index ({0}, {1}) out of range 1..=3")]
    IndexOutOfRange(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("finite-difference step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("field evaluation failed at {point:?}: {message}")]
    Evaluation { point: [f64; 3], message: String },
}

/// Schema violation in a field spec file. `pointer` is an RFC 6901 JSON
/// pointer to the offending location.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pointer}: {message}")]
pub struct FieldSpecError {
    pub pointer: String,
    pub message: String,
}

impl FieldSpecError {
    pub(crate) fn new(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        FieldSpecError {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}
