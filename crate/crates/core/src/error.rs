use thiserror::Error;

/// Errors raised by the computational layers of the crate.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MackeyError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("modulus mismatch: F_{0} vs F_{1}")]
    ModulusMismatch(u32, u32),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("subspace containment violated: {0}")]
    Containment(String),
    #[error("group of order {0} is not a {1}-group")]
    NotAPGroup(usize, u32),
    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: String, cap: usize },
    #[error("invalid group data: {0}")]
    InvalidGroup(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("not a normal subgroup: {0}")]
    NotNormal(String),
    #[error("operation requires a nonzero module")]
    ZeroModule,
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("degree {degree} exceeds cap {cap}")]
    DegreeOverCap { degree: usize, cap: usize },
    #[error("not a morphism of Mackey functors: {0}")]
    NotAMorphism(String),
    #[error("not a short exact sequence: {0}")]
    NotSes(String),
    #[error("not a normal section: {0}")]
    NotNormalSection(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("projection {0} is not surjective")]
    NotSurjective(usize),
    #[error("projection {0} is not a homomorphism")]
    NotHomomorphism(usize),
    #[error("stage {stage} out of range 1..={max}")]
    StageOutOfRange { stage: usize, max: usize },
    #[error("incompatible direction witness: {0}")]
    IncompatibleWitness(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, MackeyError>;
