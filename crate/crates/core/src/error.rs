use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),

    #[error("lattice error: {0}")]
    Lattice(String),

    #[error("negative Pochhammer length {0}")]
    NegativeLength(i64),

    #[error("not truncatable: {0}")]
    NotTruncatable(String),

    #[error("non-terminating series requires a truncation order")]
    NonTerminating,

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("missing binding `{0}`")]
    MissingBinding(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("step {step} ({word}): offsets ({a}, {b}) violate 0 <= b <= 2a")]
    Offsets {
        step: usize,
        word: String,
        a: i64,
        b: i64,
    },

    #[error("inexact division: {0}")]
    Inexact(String),

    #[error("evaluation error: {0}")]
    Eval(String),
}

pub type Result<T> = std::result::Result<T, Error>;
