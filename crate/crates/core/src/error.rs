use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("cell ({i},{j}) is not in the diagram")]
    CellNotInDiagram { i: usize, j: usize },

    #[error("the empty diagram has no scaled profile")]
    EmptyProfile,

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("measure is zero, its logarithm is undefined")]
    ZeroMeasure,

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("profile violates the hypotheses: {0}")]
    Hypothesis(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("limit exceeded: {0}")]
    Limit(String),
}
