use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("bidegree ({p},{q}) out of range for n = {n}")]
    Bidegree { n: usize, p: usize, q: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian")]
    NotHermitian,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("malformed structure input: {0}")]
    Malformed(String),

    #[error("non-integrable input: dη^{generator} has a (0,2) component `{key}`")]
    NonIntegrable { generator: usize, key: String },

    #[error("not a Lie-algebra differential: d(dη^{generator}) = {residual}")]
    NotDifferential { generator: usize, residual: String },

    #[error("pole while evaluating `{expr}` at t = {t}")]
    Pole { expr: String, t: String },

    #[error("singular frame at t = {0}")]
    SingularFrame(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("unknown corpus entry `{0}`")]
    UnknownEntry(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
