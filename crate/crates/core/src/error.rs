use thiserror::Error;

pub type Result<T> = std::result::Result<T, BellError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BellError {
    #[error("local dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index ({i}, {j}) out of range for dimension {dim}")]
    IndexOutOfRange { i: usize, j: usize, dim: usize },

    #[error("non-finite entry at position {0}")]
    NonFinite(usize),

    #[error("wrong number of entries: expected {expected}, got {found}")]
    WrongLength { expected: usize, found: usize },

    #[error("ket not normalized: |norm - 1| = {0:.3e}")]
    NotNormalized(f64),

    #[error("operator not Hermitian: max |A - A^dagger| entry = {0:.3e}")]
    NotHermitian(f64),

    #[error("trace not 1: |tr - 1| = {0:.3e}")]
    BadTrace(f64),

    #[error("not positive semidefinite: smallest eigenvalue = {0:.3e}")]
    NotPositive(f64),

    #[error("expectation value has imaginary part {0:.3e}")]
    ImaginaryResidue(f64),

    #[error("total dimension {total} is not {local}^2")]
    NotBipartite { total: usize, local: usize },

    #[error("brute-force enumeration supports {min} <= N <= {max}, got {dim}")]
    BruteForceRange { dim: usize, min: usize, max: usize },

    #[error("mixing weight {0} outside [0, 1]")]
    LambdaOutOfRange(f64),

    #[error("no sign change of B - 2 on [0, 1]: B(0) = {at_zero}, B(1) = {at_one}")]
    NoSignChange { at_zero: f64, at_one: f64 },

    #[error("shots per combination must be at least 1")]
    ZeroShots,
}
