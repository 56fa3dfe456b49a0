use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series precondition violated: {0}")]
    SeriesPrecondition(String),

    #[error("elements belong to different contexts")]
    ContextMismatch,

    #[error("element precondition violated: {0}")]
    ElementPrecondition(String),

    #[error("mixed-parity element passed to graded commutator")]
    MixedParity,

    #[error("not divisible by a0^{k}: {detail}")]
    NotDivisible { k: usize, detail: String },

    #[error("insufficient precision: need order {needed}, have {have}")]
    Precision { needed: usize, have: usize },

    #[error("invalid realization input: {0}")]
    Realization(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("cannot evaluate `{expr}`: {reason}")]
    Eval { expr: String, reason: String },

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
