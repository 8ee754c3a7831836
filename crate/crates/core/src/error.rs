use thiserror::Error;

/// Errors produced by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator id {0}")]
    UnknownGenerator(usize),
    #[error("generator `{name}` has degree 0; generators must have degree >= 1")]
    ZeroDegreeGenerator { name: String },
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("degree cap {cap} exceeded (requested degree/exponent {requested})")]
    DegreeCapExceeded { cap: u32, requested: u32 },
    #[error("image of generator `{gen}` is not homogeneous of degree {expected}")]
    NonHomogeneousImage { gen: String, expected: i64 },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("degree {degree} is outside the computed range 0..={max}")]
    DegreeOutOfRange { degree: u32, max: u32 },
    #[error("polynomial is not a cocycle: d(p) = {dp}")]
    NotACocycle { dp: String },
    #[error("polynomial does not lie in the span of the stored basis")]
    NotInBasis,
    #[error("no class with index {index} in degree {degree}")]
    NoSuchClass { degree: u32, index: usize },
    #[error(
        "Lie algebra is not nilpotent: lower central series stabilizes at dimension {stable_dim}"
    )]
    NotNilpotent { stable_dim: usize },
    #[error("Jacobi identity fails on (X{i}, X{j}, X{k})")]
    JacobiFailure { i: usize, j: usize, k: usize },
    #[error("bracket index {index} out of range for dimension {dim}")]
    BracketIndexOutOfRange { index: usize, dim: usize },
    #[error("cdga failed validation: {0}")]
    InvalidCdga(String),
    #[error("relative model is inconsistent: {0}")]
    InvalidRelativeModel(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("matrix dimensions do not match: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;
