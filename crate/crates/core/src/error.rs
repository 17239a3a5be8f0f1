use thiserror::Error;

use crate::exactreal::ExactRealError;
use crate::lattice::{LatticeError, Point, Support};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Real(#[from] ExactRealError),
    #[error("slope is not totally irrational: {relation}")]
    NotTotallyIrrational { relation: String },
    #[error("degenerate slope: {0}")]
    DegenerateSlope(String),
    #[error("support {0} is not connected")]
    DisconnectedSupport(Support),
    #[error("the map from F - S to patterns over {support} is not injective")]
    NotInjective { support: Support },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("guard exceeded: {what} {requested} > {limit}")]
    GuardExceeded {
        what: String,
        requested: usize,
        limit: usize,
    },
    #[error("declared difference set is wrong at {point}: {detail}")]
    DifferenceSetMismatch { point: Point, detail: String },
    #[error("no finite difference set: {0}")]
    NoDifferenceSet(String),
    #[error("flip condition fails: {0}")]
    FlipConditionFails(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
