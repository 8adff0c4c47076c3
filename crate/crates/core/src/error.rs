use thiserror::Error;

use crate::scalar::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid field `{0}` (expected a prime or Q)")]
    InvalidField(String),

    #[error("unknown generator id {0}")]
    UnknownGenerator(u32),

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("`{0}` is not an augmentation: {1}")]
    NotAnAugmentation(String, String),

    #[error("maps are not mutually inverse on generator `{0}`")]
    InverseCheckFailed(String),

    #[error("map does not preserve the degree of generator `{0}`")]
    DegreeNotPreserved(String),

    #[error("differential of `{0}` has a constant term")]
    ConstantTerm(String),

    #[error("product entry {0} is not homogeneous of the required degree")]
    InhomogeneousProduct(String),

    #[error("basis element index {0} out of range")]
    BasisOutOfRange(usize),

    #[error("invalid knot parameters: {0}")]
    InvalidParams(String),

    #[error("contraction is invalid: {0}")]
    InvalidContraction(String),

    #[error("max arity must be at least 2 (got {0})")]
    ArityTooSmall(usize),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("genus must be at least 1 (got {0})")]
    InvalidGenus(usize),

    #[error("sample count must be positive")]
    NoSamples,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
