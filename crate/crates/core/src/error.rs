use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("objects live over different rings")]
    RingMismatch,
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("degree inconsistency: {0}")]
    Degree(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("zero element not allowed: {0}")]
    ZeroElement(String),
    #[error("unit ideal not allowed: {0}")]
    UnitIdeal(String),
    #[error("prime splitting stalled on ideal ({0})")]
    SplittingStalled(String),
    #[error("factorization failed: {0}")]
    Factorization(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("grade computation reached its bound of {0} without a nonzero Ext")]
    GradeBound(usize),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
}
