//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Geometry configuration that cannot produce a mesh (zero cells, h <= 0, ...).
    InvalidGeometry(String),
    /// Physical or solver parameter out of its admissible range.
    InvalidParameter(String),
    /// Matched interface pair whose node coordinates disagree.
    UnmatchedInterfaceNode { edge: usize, position: usize },
    /// System assembled without any grounding (no Dirichlet set, no deflation).
    SingularSystem(String),
    /// Nonpositive pivot during factorization; `row` is the offending index
    /// in the caller's numbering.
    NotPositiveDefinite { row: usize },
    /// Coarse operator lost rank; `column` names the first dependent column.
    RankDeficientCoarse { column: usize },
    DimensionMismatch { expected: usize, got: usize },
    /// PCG met a nonpositive curvature or inner product; the operator or
    /// preconditioner is not SPD on the iterated subspace.
    Breakdown { iteration: usize },
    MaxIterations { iterations: usize, rel_residual: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGeometry(msg) => write!(f, "invalid geometry: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::UnmatchedInterfaceNode { edge, position } => {
                write!(f, "interface edge {edge}: node pair {position} does not match geometrically")
            }
            Error::SingularSystem(msg) => write!(f, "singular system: {msg}"),
            Error::NotPositiveDefinite { row } => {
                write!(f, "matrix is not positive definite (pivot at row {row})")
            }
            Error::RankDeficientCoarse { column } => {
                write!(f, "coarse operator is rank deficient (column {column})")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::Breakdown { iteration } => {
                write!(f, "conjugate gradient breakdown at iteration {iteration}")
            }
            Error::MaxIterations { iterations, rel_residual } => {
                write!(f, "no convergence in {iterations} iterations (relative residual {rel_residual:.3e})")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
