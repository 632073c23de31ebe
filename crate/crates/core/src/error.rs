use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("unsupported tower: cannot mix x^{m1}-({q1}) with x^{m2}-({q2})")]
    UnsupportedTower { m1: u32, q1: String, m2: u32, q2: String },
    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not admissible: {0}")]
    NotAdmissible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
