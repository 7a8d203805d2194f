use thiserror::Error;

/// Errors raised across the modelling pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Wire geometry that violates the thin-wire kernel assumptions.
    #[error("mesh error: {0}")]
    Mesh(String),

    /// Inconsistent port or run configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Singular or ill-conditioned linear system.
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
