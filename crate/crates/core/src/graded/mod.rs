//! Coordinate data, the algebra `(g⊗A) ⊕ (s⊗B) ⊕ (u⊗c) ⊕ d` assembled from it,
//! and certification of the root-graded axioms.

mod axioms;
mod build;
mod data;
pub(crate) mod rootgraded;

pub use axioms::{verify_coordinate_axioms, AxiomCheck, AxiomReport};
pub use build::{build_graded, build_graded_with, GradedAlgebra, Origin, Sector};
pub use data::{BilinearTable, CoordinateData, DataJson, DataParts, SectionJson, TableJson};
pub use rootgraded::{center, psi_root_set, quotient_by_center, r_root_set, verify_root_graded, QuotientReport, RootGradedReport, ToralWitness};

use crate::exactalg::AlgError;
use crate::osp::OspError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GradedError {
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Osp(#[from] OspError),
    #[error("malformed coordinate data: {0}")]
    Shape(String),
    #[error("{0} leaves the subspace it must lie in")]
    EscapesSubspace(String),
    #[error("coordinate axioms fail: {}", .0.join("; "))]
    Axioms(Vec<String>),
    #[error("parity mismatch in {0}")]
    Parity(String),
    #[error("2m+1−2n vanishes for (m, n) = ({m}, {n})")]
    Degenerate { m: u32, n: u32 },
    #[error("grading pair ({m0}, {n0}) does not fit inside ({m}, {n})")]
    GradingPair { m0: u32, n0: u32, m: u32, n: u32 },
}
