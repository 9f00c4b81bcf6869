use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {0} exceeds the supported budget")]
    Overflow(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("element {value} is not in a field of order {q}")]
    ElementOutOfRange { value: u64, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("operation requires a field of odd order")]
    EvenField,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("inconsistent form class: {0}")]
    BadClass(String),
    #[error("forms are not equivalent")]
    NotEquivalent,
    #[error("vectors are linearly dependent")]
    LinearlyDependent,
    #[error("form is degenerate")]
    Degenerate,
    #[error("classification is only implemented for odd q and q = 2")]
    UnsupportedField,
    #[error("set contains the zero vector at position {0}")]
    ZeroVector(usize),
    #[error("set contains duplicate vectors at positions {0} and {1}")]
    Duplicate(usize, usize),
    #[error("set is not an orthogonal set")]
    NotOrthogonal,
    #[error("set is not (3,2)-orthogonal")]
    Not32Orthogonal,
    #[error("vector is not a member of the set")]
    NotMember,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("budget exceeded after {examined} steps")]
    BudgetExceeded { examined: u64 },
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("bound violated: {0}")]
    BoundViolated(String),
    #[error("no witness found: {0}")]
    WitnessNotFound(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
