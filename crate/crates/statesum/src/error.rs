use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate bilinear form; kernel vector {kernel:?}")]
    Degenerate { kernel: Vec<String> },
    #[error("face amplitude R must be nonzero")]
    ZeroAmplitude,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("Frobenius data is not special: R m(B) != 1")]
    NotSpecial,
    #[error("scalar field lacks a required root of unity of order {0}")]
    MissingRootOfUnity(u32),
    #[error("not an involution: {0}")]
    NotAnInvolution(String),
    #[error("axiom failure: {0}")]
    Axiom(String),
    #[error("grading condition violated: {0}")]
    Grading(String),
    #[error("inconsistent center decomposition: {0}")]
    InconsistentCenterDecomposition(String),
    #[error("resource cap exceeded: needs {needed} multiplications, cap {cap}")]
    ResourceCap { needed: u128, cap: u128 },
    #[error("invalid site: {0}")]
    InvalidSite(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
