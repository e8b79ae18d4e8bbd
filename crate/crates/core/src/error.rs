use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadeError {
    #[error("at least one lambda is required")]
    EmptyConfig,
    #[error("lambda_{0} is a negative integer")]
    NegativeIntegerLambda(usize),
    #[error("lambda_{0} - lambda_{1} is an integer")]
    IntegerDifference(usize, usize),
    #[error("parameter out of supported range: {0}")]
    ParameterTooLarge(String),
    #[error("invalid degree vector: {0}")]
    InvalidDegrees(String),
    #[error("bracket factorial [{nu}] vanishes for lambda = {lambda}")]
    ZeroFactor { lambda: String, nu: usize },
    #[error("structural invariant violated in row {row}: {what}")]
    InvariantViolation { row: usize, what: String },
    #[error("linear system is singular")]
    SingularSystem,
    #[error("determinant identity fails at coefficient z^{index}: {coefficient}")]
    OmegaViolation { index: usize, coefficient: String },
    #[error("{0} is not a squarefree field discriminant parameter")]
    InvalidField(u64),
    #[error("elements from different fields: d = {0} and d = {1}")]
    FieldMismatch(u64, u64),
    #[error("invalid quadratic integer: {0}")]
    InvalidQuadratic(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("all coefficients of the linear form are zero")]
    ZeroLinearForm,
    #[error("expected {expected} coefficients, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("outside the domain of the bound: {0}")]
    Domain(String),
    #[error("no bracketing interval found below {0}")]
    NoBracket(String),
    #[error("integrality fails at {0}")]
    IntegralityViolation(String),
    #[error("bound {name} fails at {index}")]
    BoundViolation { name: String, index: String },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, PadeError>;
