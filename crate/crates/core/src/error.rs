use thiserror::Error;

use crate::problem::ElementId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid solution: {0}")]
    InvalidSolution(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("element {0} is already committed")]
    AlreadyCommitted(ElementId),

    #[error("{what} has size {size}, above the exhaustive limit of {limit}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("no feasible candidate: {0}")]
    Infeasible(String),

    #[error("model violation: {0}")]
    ModelViolation(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("vertex {0} cannot reach the sink")]
    Unreachable(usize),

    #[error("malformed graph: {0}")]
    Structural(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
