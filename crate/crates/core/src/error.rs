use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u32),
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u32 },
    #[error("field F_{p}^{e} is too large for table arithmetic (limit 65536 elements)")]
    FieldTooLarge { p: u32, e: u32 },
    #[error("operands live over different coefficient fields")]
    ContextMismatch,
    #[error("division by zero")]
    ZeroDivision,
    #[error("no {n}-th root of {element} in F_{p}^{e}; enlarge the extension degree e")]
    RootNotInField {
        n: u64,
        element: String,
        p: u32,
        e: u32,
    },
    #[error("root index {n} is divisible by the characteristic {p}")]
    IndexDivisibleByP { n: u64, p: u32 },
    #[error("exponent {exponent} is not divisible by p = {p}")]
    ExponentNotDivisible { exponent: i64, p: u32 },
    #[error("valuation {valuation} is not divisible by the root index {n}")]
    ValuationNotDivisible { valuation: i64, n: u64 },
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("operation on an exact series would produce infinitely many terms; truncate first")]
    UnboundedPrecision,
    #[error("substitution needs infinitely many contributing terms: {0}")]
    DivergentSubstitution(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("input is not reduced: {0}")]
    NotReduced(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("the two inputs define the same extension")]
    EqualExtensions,
    #[error("invalid jump profile: {0}")]
    InvalidProfile(String),
    #[error("claim violated in series expansion: {0}")]
    ClaimViolated(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::InsufficientPrecision(msg.into())
    }
}
