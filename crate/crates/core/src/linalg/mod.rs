//! Exact linear algebra over ℚ: matrices, graded spaces and maps, chain
//! complexes, homology and mapping cones.

mod complex;
mod graded;
mod matrix;
mod rational;

pub use complex::{
    homology_dims, induced_map, mapping_cone, rank, rescale_by_grading, ClassRep, Complex, ConeComplex, Homology,
    HomologyDims, HomologyMap,
};
pub use graded::{Generator, GradedMap, GradedSpace, Grading, Z2};
pub use matrix::Matrix;
pub use rational::{format_half, format_rational, int, parse_half, parse_rational, ratio, Rational};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("map is not a chain map")]
    NotChainMap,
    #[error("vector is not a cycle")]
    NotACycle,
    #[error("span is not closed under the differential")]
    NotSubcomplex,
    #[error("no scalar for grading {0:?}")]
    MissingScalar(Grading),
    #[error("zero scalar for grading {0:?}")]
    ZeroScalar(Grading),
    #[error("duplicate generator label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown generator label {0:?}")]
    UnknownLabel(String),
    #[error("entry {from} -> {to} out of range")]
    IndexOutOfRange { from: usize, to: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
}
