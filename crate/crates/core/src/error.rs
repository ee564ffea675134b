use thiserror::Error;

use crate::grid::{Axis, IndexRect};
use crate::rectcalc::{CoherenceReport, QReport};

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid axis: {0}")]
    InvalidAxis(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("value {value} at ({i}, {j}) outside [0, 1]")]
    ValueOutOfRange { i: usize, j: usize, value: String },

    #[error("rectangle {0:?} out of range for mesh")]
    IndexOutOfRange(IndexRect),

    #[error("grid point ({0}, {1}) out of range for mesh")]
    PointOutOfRange(usize, usize),

    #[error("meshes differ")]
    MeshMismatch,

    #[error("axis kinds differ")]
    KindMismatch,

    #[error("point outside the mesh domain: {0}")]
    OutsideDomain(String),

    #[error("function is not grounded: value {value} at ({i}, {j})")]
    NotGrounded { i: usize, j: usize, value: String },

    #[error("margin is not a univariate distribution: {0}")]
    InvalidMargin(String),

    #[error("margins differ on the {axis} axis at coordinate {coord}")]
    MarginMismatch { axis: Axis, coord: String },

    #[error("lower bound exceeds upper bound at ({i}, {j})")]
    NotOrdered { i: usize, j: usize },

    #[error("{0}")]
    Precondition(String),

    #[error("gaggle members {0:?} and {1:?} overlap")]
    OverlappingGaggle(IndexRect, IndexRect),

    #[error("empty gaggle")]
    EmptyGaggle,

    #[error("inconsistent collapse on the {axis} axis: coordinates {first} and {second} share a margin value but not their column values")]
    InconsistentCollapse { axis: Axis, first: String, second: String },

    #[error("mesh too large for exact search: {0}")]
    TooLarge(String),

    #[error("pair is not coherent")]
    Incoherent(Box<CoherenceReport>),

    #[error("pair fails (Q1)/(Q2)")]
    QCheckFailed(Box<QReport>),

    #[error("post-validation failed: {0}")]
    PostValidation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
