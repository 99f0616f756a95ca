use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} has no multiplicative inverse")]
    ZeroInverse(String),
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("coefficient domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("index {index} out of range for {len} variables")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("local dimension did not stabilize by truncation order {n_max}")]
    NoStabilization { n_max: u32 },
    #[error("operator has a zero-order term; inertia tests take representatives of D/O")]
    ZeroOrderTerm,
    #[error("polynomial has linear terms, the origin is not a critical point")]
    NotCritical,
    #[error("curve is singular, Hasse bound does not apply")]
    SingularCurve,
    #[error("state space of {states} states exceeds the budget of {budget}")]
    StateBudgetExceeded { states: u128, budget: u64 },
    #[error("characteristic 2 is excluded for this computation")]
    RefuseChar2,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
