//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A label is not live in the graph it was used on.
    #[error("vertex: label {0} is not live")]
    Vertex(usize),
    /// A pivot was requested at a non-edge.
    #[error("no-edge: {0} and {1} are not adjacent")]
    NoEdge(usize, usize),
    /// Label sets do not nest the way an operation requires.
    #[error("labels: {0}")]
    Labels(String),
    /// Matrix shape violates an operation precondition.
    #[error("shape: {0}")]
    Shape(String),
    /// An argument is outside its admissible range.
    #[error("range: {0}")]
    Range(String),
    /// An enumeration or search exceeded its configured budget.
    #[error("budget: {0}")]
    Budget(String),
    /// The provided set is not a basis of the matroid.
    #[error("not-basis: {0}")]
    NotBasis(String),
    /// A precondition on part membership or disjointness failed.
    #[error("precondition: {0}")]
    Precondition(String),
    /// Input could not be parsed.
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
