//! Finite-dimensional `g`-modules given by action matrices: weights,
//! highest weight vectors, decomposition into the four standard irreducibles,
//! and spaces of equivariant maps.

mod decompose;
mod hom;
mod module;
mod weights;

pub use decompose::{decompose, is_positive, shuffled_sum, DecompositionReport, Decomposer, FoundConstituent, Tag};
pub use hom::{basis_weights, hom_space, hom_space_with, HomSpace, Over};
pub use module::{GModule, ModuleJson};
pub use weights::{weights_of, ModuleWeights};

use crate::exactalg::AlgError;
use crate::osp::OspError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepnError {
    #[error(transparent)]
    Osp(#[from] OspError),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error("modules act through different sets of basis elements, or the set is not ascending")]
    ActingSet,
    #[error("an odd element acts; parity parts are only modules over the even part")]
    OddActing,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("the Cartan subalgebra does not act")]
    CartanMissing,
    #[error("the action of the Cartan element for {0} is not diagonalizable with integer eigenvalues")]
    NotDiagonalizable(String),
    #[error("weight {0} lies outside Ψ")]
    OutsidePsi(String),
    #[error("decomposition needs n ≥ 2 (got n = {0})")]
    SmallN(u32),
    #[error("model module {0} does not have a unique highest weight vector")]
    ModelHighestWeight(String),
    #[error("unknown basis label {0:?}")]
    UnknownLabel(String),
    #[error("{0}")]
    Parse(String),
}
