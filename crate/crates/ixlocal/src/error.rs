use thiserror::Error;

use crate::problem::ValidationReport;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(u32),

    #[error("self-loop on vertex {0}")]
    SelfLoop(u32),

    #[error("subset element {0} is outside 1..=12")]
    SubsetOutOfRange(u32),

    #[error("graph has {vertices} vertices, exceeding the exhaustive-search budget of {budget}")]
    VertexBudgetExceeded { vertices: usize, budget: usize },

    #[error("search space of {space} exceeds the budget of {budget} elementary checks")]
    SearchBudgetExceeded { space: u128, budget: u64 },

    #[error("invalid problem:\n{0}")]
    InvalidProblem(ValidationReport),

    #[error("problem is not single-unicast: {0}")]
    NotSingleUnicast(String),

    #[error("invalid clique partition: {0}")]
    InvalidPartition(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed linear program: {0}")]
    LpShape(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
