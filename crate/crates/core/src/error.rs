use thiserror::Error;

/// Errors raised by the linearization engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("order < 2: first-order equations are always linearizable")]
    OrderTooLow,
    #[error("highest derivative missing")]
    HighestDerivativeMissing,
    #[error("not quasi-linear: the highest derivative must appear linearly")]
    NotQuasiLinear,
    #[error("undeclared function `{0}`")]
    UndeclaredFunction(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("reserved name `{0}`")]
    ReservedName(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("no leader: polynomial is free of function derivatives")]
    NoLeader,
    #[error("partial derivative applied to a polynomial with jet variables")]
    JetInPartial,
    #[error("parameters/functions present - use Test II")]
    ParametersPresent,
    #[error("inconsistent system: completion produced a nonzero constant")]
    Inconsistent,
    #[error("dimension of the solution space is infinite")]
    InfiniteDimension,
    #[error("singular expansion point ({0}, {1})")]
    SingularPoint(String, String),
    #[error("truncation insufficient to express brackets in the series basis")]
    TruncationInsufficient,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
