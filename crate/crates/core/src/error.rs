use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NctError {
    /// Malformed input data (unknown cell, bad JSON, arity mismatch).
    #[error("input error: {0}")]
    Input(String),
    /// A requested dimension exceeds the ambient bound.
    #[error("dimension error: {0}")]
    Dimension(String),
    /// An enumeration or completion bound was hit.
    #[error("resource bound exceeded: {what} (bound {bound})")]
    Resource { what: String, bound: u64 },
    /// The window does not contain enough test objects to decide.
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    /// A construction produced an object violating the axioms.
    #[error("internal error: {0}")]
    Internal(String),
}

impl NctError {
    pub fn input(msg: impl Into<String>) -> Self {
        NctError::Input(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        NctError::Internal(msg.into())
    }

    pub fn resource(what: impl Into<String>, bound: u64) -> Self {
        NctError::Resource { what: what.into(), bound }
    }
}

pub type Result<T> = std::result::Result<T, NctError>;
