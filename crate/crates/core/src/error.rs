use thiserror::Error;

/// Errors raised by constructions, solvers and parsers in this crate.
///
/// Everything except [`Error::InvariantViolation`] is a problem with the
/// caller's input. An invariant violation means a postcondition check failed
/// and indicates a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("order {order} exceeds the supported cap {cap}")]
    UnsupportedOrder { order: u64, cap: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("hypergraph has no edges")]
    NoEdges,

    #[error("epsilon {eps} is not inside (0, {bound})")]
    EpsilonTooLarge { eps: String, bound: String },

    #[error("{n} is not divisible by {divisor}")]
    NotDivisible { n: u64, divisor: u64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("design is not resolvable: {0}")]
    NotResolvable(String),

    #[error("enumeration needs {required} colorings, cap is {cap}")]
    TooLarge { required: String, cap: u64 },

    #[error("r = {r} is outside the supported range 3..={cap}")]
    UnsupportedR { r: usize, cap: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal invariant failed: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    /// True when the error signals a failed internal check rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}
