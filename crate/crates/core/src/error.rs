use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid torus parameters: {0}")]
    InvalidParams(String),
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
    #[error("point lies on the diagonal")]
    DiagonalPoint,
    #[error("unsupported request: {0}")]
    Unsupported(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid cube complex: {0}")]
    InvalidComplex(String),
    #[error("unknown golden table `{0}`")]
    UnknownGolden(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
