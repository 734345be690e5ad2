use thiserror::Error;

/// Problems building or loading a code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodeError {
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },
    #[error("entry ({row}, {col}) is {value}, expected 0 or 1")]
    NotBinary { row: usize, col: usize, value: u8 },
    #[error("parity-check matrix has full column rank; the code is {{0}} (k = 0)")]
    TrivialCode,
    #[error("vector has length {found}, code length is {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("position {position} is outside 0..{n}")]
    PositionOutOfRange { position: usize, n: usize },
    #[error("position {0} is constrained twice")]
    DuplicateConstraint(usize),
    #[error("alist line {line}: {message}")]
    Alist { line: usize, message: String },
    #[error("unknown builtin code `{0}`")]
    UnknownBuiltin(String),
}

/// Failures from the LP solver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("numerical failure in simplex: {0}")]
    Numerical(String),
    #[error("simplex iteration limit ({0}) reached")]
    IterationLimit(usize),
}

/// Errors surfaced by the decoders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodeError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("LLR entry {index} is not finite ({value})")]
    NonFiniteLlr { index: usize, value: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
}
