use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("rank condition violated: {0}")]
    Rank(String),
    #[error("zero vector has no primitive part")]
    ZeroVector,
    #[error("form is not primitive: {0}")]
    NotPrimitive(String),
    #[error("evaluation point hits a pole: {0}")]
    Pole(String),
    #[error("singular parameter in infinite product: {0}")]
    Singular(String),
    #[error("lattice is not good for N={0}: {1}")]
    NotGood(i64, String),
    #[error("inadmissible numeric parameter: {0}")]
    Inadmissible(String),
    #[error("no integer solution")]
    NoSolution,
    #[error("{0}")]
    Domain(String),
}
