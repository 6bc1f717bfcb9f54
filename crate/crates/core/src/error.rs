use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Laurent polynomial division left a nonzero remainder.
    #[error("non-exact division: remainder is nonzero")]
    NonExactDivision,
    /// Input to the exponential-combination extraction has neither symmetry
    /// under `u -> 1/u`.
    #[error("input is neither symmetric nor antisymmetric under u -> 1/u")]
    AsymmetricInput,
    /// An odd power of `u` appeared where only even powers are allowed.
    #[error("odd exponent {0} of u where only even exponents are allowed")]
    OddExponent(i64),
    /// The operator E_0(0) is undefined.
    #[error("the operator E_0(0) is undefined")]
    UndefinedOperator,
    /// Operator word violates its preconditions.
    #[error("invalid operator word: {0}")]
    InvalidWord(String),
    /// A score assertion failed during an instrumented correlator run.
    #[error("score assertion violated: {0}")]
    ScoreViolation(String),
    /// A structure coefficient that must be an integer is not.
    #[error("structure coefficient C({mu:?}, {m}) = {value} is not an integer")]
    NonIntegerCoefficient { mu: Vec<u64>, m: u64, value: String },
    /// A Hurwitz query violates its preconditions.
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    /// Two independent computations of the same quantity disagree.
    #[error("consistency failure: {0}")]
    ConsistencyFailure(String),
    /// An exhaustive enumeration would exceed the configured budget.
    #[error("enumeration budget exceeded: {0} tuples requested, budget {1}")]
    BudgetExceeded(f64, f64),
    /// The degree is too large for the group-algebra convolution oracle.
    #[error("degree {0} too large for the convolution oracle (max {1})")]
    DegreeTooLarge(u64, u64),
    /// The linear system of the model fit is singular.
    #[error("singular system: {0}")]
    SingularSystem(String),
    /// Text input could not be parsed.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
