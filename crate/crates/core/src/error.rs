use thiserror::Error;

/// Errors produced by the workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("0 has no multiplicative inverse")]
    ZeroInverse,
    #[error("dilation by 0 is not a bijection")]
    ZeroDilation,
    #[error("no subgroup of order {order} in F_{p}^*: {order} does not divide {}", p - 1)]
    InvalidOrder { p: u64, order: u64 },
    #[error("operands live in different fields (F_{left} vs F_{right})")]
    FieldMismatch { left: u64, right: u64 },
    #[error("profile has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("the restricted mass sigma_P(A) is zero")]
    EmptyMass,
    #[error("the difference set P is not symmetric")]
    AsymmetricP,
    #[error("epsilon must lie in (0, 1], got {0}")]
    BadEpsilon(String),
    #[error("the source set of a spectrum must be nonempty")]
    EmptySource,
    #[error("frequency {0} is not in the spectrum")]
    NotInSpectrum(u64),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("equation coefficients a, b, c must be nonzero")]
    ZeroCoefficient,
    #[error("equations on lines {first} and {second} are proportional")]
    DuplicateEquation { first: usize, second: usize },
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("the equation family is empty")]
    EmptyFamily,
    #[error("set has {0} elements, at least 2 are required")]
    TooSmall(usize),
    #[error("order t = {t} requires 2t < p = {p}")]
    BadOrder { t: u64, p: u64 },
    #[error("the dilation set X must not contain 0")]
    ZeroInX,
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
