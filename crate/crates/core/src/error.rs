use alloc::string::String;

use thiserror::Error;

/// Errors surfaced by the core algorithms.
///
/// Variants carrying a `String` hold a human-readable witness; structured witnesses
/// (violations of ultrametric axioms, failed certificate clauses) are returned as
/// values by the operations that produce them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ordinal parse error at position {pos}: {msg}")]
    OrdinalParse { pos: usize, msg: String },
    #[error("ordinal coefficient out of range: {0}")]
    OrdinalRange(String),
    #[error("malformed endpoint sequence: {0}")]
    Endpoint(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("empty interval or box: {0}")]
    EmptyInterval(String),
    #[error("invalid ball space: {0}")]
    InvalidBallSpace(String),
    #[error("enumeration bound exceeded: {size} balls > bound {bound}")]
    BoundExceeded { size: usize, bound: usize },
    #[error("invalid schema `{name}`: {msg}")]
    InvalidSchema { name: String, msg: String },
    #[error("certificate clause {clause} failed: {msg}")]
    Certificate { clause: String, msg: String },
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("unknown identifier `{0}`")]
    UnknownId(String),
    #[error("point-set mismatch: {0}")]
    PointMismatch(String),
    #[error("{0}")]
    Invalid(String),
}
