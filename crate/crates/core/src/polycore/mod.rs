//! Exact sparse multivariate polynomials over the rationals.
//!
//! Parsing and printing, evaluation, ring operations, and the diagonal
//! substitution `f(x) -> f(a_1 x_1, ..., a_n x_n)` together with the matching
//! map on axis-aligned boxes.

mod exponent;
mod parse;
mod polynomial;
mod region;

use thiserror::Error;

pub use exponent::ExponentVector;
pub use parse::parse;
pub use polynomial::SparsePolynomial;
pub use region::BoxRegion;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("variable x{index} at position {position} is out of range 1..={n}")]
    VariableOutOfRange {
        position: usize,
        index: u32,
        n: usize,
    },
    #[error("negative exponent at position {position}")]
    NegativeExponent { position: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("scaling factor a_{} is zero", index + 1)]
    ZeroScale { index: usize },
    #[error("region has no axes")]
    EmptyRegion,
    #[error("interval on axis {} must satisfy lo < hi", axis + 1)]
    DegenerateInterval { axis: usize },
    #[error("grid resolution must be at least 2 points per axis, got {resolution}")]
    GridResolution { resolution: usize },
}
