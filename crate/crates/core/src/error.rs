use thiserror::Error;

/// Errors raised by the numerical kernel, the tomography pipeline and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max |m - m^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max |u^dagger u - 1| = {0:e})")]
    NotUnitary(f64),

    #[error("state vector is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("log-branch-failure: {0}")]
    LogBranchFailure(String),

    #[error("eigenvector matrix is ill-conditioned (condition number {0:e})")]
    IllConditioned(f64),

    #[error("linear system is singular")]
    Singular,

    #[error("design-singular: condition number {0:e}")]
    DesignSingular(f64),

    #[error("non-loggable-channel: {0}")]
    NonLoggableChannel(String),

    #[error("eigensolver did not converge")]
    NoConvergence,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
