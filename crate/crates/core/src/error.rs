use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("contrast has nonzero total mass {total:e}")]
    NonzeroMass { total: f64 },
    #[error("mixed support or space: {0}")]
    MixedSupport(String),
    #[error("kernel incompatible with operands: {0}")]
    IncompatibleKernel(String),
    #[error("quadrature failed to reach tolerance {tolerance:e} (estimate {estimate:e}): {context}")]
    QuadratureFailure {
        context: String,
        tolerance: f64,
        estimate: f64,
    },
    #[error("singular kriging system: {0}")]
    SingularSystem(String),
    #[error("point is not interior: {0}")]
    NotInterior(String),
    #[error("spectral density has a pole at the origin")]
    PoleAtOrigin,
    #[error("lag ({0}, {1}) outside the potential-kernel table")]
    LagOutOfRange(i64, i64),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
