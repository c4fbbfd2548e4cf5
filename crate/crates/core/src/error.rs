use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid device parameters: {0}")]
    InvalidDevice(String),

    #[error("invalid material parameters: {0}")]
    InvalidMaterial(String),

    #[error("invalid coupling matrices: {0}")]
    InvalidCoupling(String),

    #[error("invalid register state: {0}")]
    InvalidState(String),

    #[error("invalid dimer partition: {0}")]
    InvalidPartition(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("integrator failure: {0}")]
    Integrator(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("unsupported size: {0}")]
    Unsupported(String),

    #[error("{0}")]
    Domain(String),
}
