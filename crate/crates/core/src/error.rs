use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("variable list mismatch between polynomial operands")]
    VarListMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("number of odd pairs mismatch: {0} vs {1}")]
    PairMismatch(usize, usize),
    #[error("generator index {index} out of range for k = {k}")]
    GeneratorOutOfRange { index: usize, k: usize },
    #[error("nonzero t-degree {0} where a t-free polynomial is required")]
    NonzeroTDegree(i32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("bracket ({0}, {1}) leaves the t-band; request a larger band")]
    OutOfBand(usize, usize),
    #[error("{0} is a Cartan element")]
    CartanElement(String),
    #[error("degenerate pairing: {0}")]
    Degenerate(String),
    #[error("singular Cartan Gram matrix")]
    SingularCartanGram,
    #[error("zero weight on non-Cartan element {0}")]
    ZeroWeight(String),
    #[error("missing dual for basis element {0}")]
    MissingDual(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
