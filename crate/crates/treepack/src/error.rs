use thiserror::Error;

use crate::graph::EdgeId;

/// Errors shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad ids, non-permutations, invalid parameters.
    #[error("invalid input: {0}")]
    Input(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An exhaustive mode was asked to run beyond its size limit.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// No tree is free of earlier same-block edges; the ordering is too
    /// coarse for the requested number of trees.
    #[error("no eligible tree for edge {edge} at step {step}")]
    NoEligibleTree { step: usize, edge: EdgeId },

    /// A lazily presented family promised a window that does not contain
    /// the fundamental cycle needed at some step.
    #[error("window violation at step {step}: {detail}")]
    WindowViolation { step: usize, detail: String },

    /// An internal invariant of the exchange process failed. This signals a
    /// bug, not a property of the input.
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// Text or JSON graph/certificate input could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
