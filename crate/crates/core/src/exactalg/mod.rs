//! Exact rational scalars, parity-indexed sparse matrices, supertrace and
//! supercommutators, and exact linear solving.

mod algebra;
mod index;
mod linmap;
mod linsolve;
mod matrix;
pub mod scalar;
mod sparse;

pub use algebra::{
    centralizer, check_super_antisymmetry, check_super_jacobi, jacobiator, thread_cap, with_pool, JacobiReport, Scope,
    StructureTable, SuperAlgebra,
};
pub use index::{sign_flip, IndexUniverse, Parity, SuperIndex};
pub use linmap::LinearMap;
pub use linsolve::{rank, solve_linear, Coordinatizer, Eliminator, SolutionSpace};
pub use matrix::{supercommutator, supercommutator_split, superanticommutator, supertrace, SuperMatrix, SuperVector, Triplet};
pub use scalar::Scalar;
pub use sparse::SparseVec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgError {
    #[error("element is not homogeneous; split it into even and odd parts first")]
    NonHomogeneous,
    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),
    #[error("cannot parse index label {0:?}")]
    ParseIndex(String),
    #[error("basis family is linearly dependent")]
    Dependent,
    #[error("bracket of {left} and {right} leaves the span of the basis")]
    NotClosed { left: String, right: String },
    #[error("result leaves the coordinate window")]
    OutOfWindow,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}
