//! Super-toral triples, the extended affine axioms, cores, and the
//! affinization `g ⊕ V ⊕ V†` of a graded algebra with an invariant form.

mod affine;
mod check;
mod core;
mod triple;

pub use affine::{affinize, loop_form, loop_osp, osp_triple, round_trip, AffinizedAlgebra, RoundTripReport};
pub use check::{check_eals, EalsReport, Verdict};
pub(crate) use self::core::combo_label;
pub use self::core::{anisotropic_support, center_of, core, span_subalgebra, verify_core_graded, CoreGradedReport, Subalgebra};
pub use triple::{Sl2Triple, SuperToralTriple, TripleJson, WindowJson, WindowRule};

use crate::exactalg::AlgError;
use crate::graded::GradedError;
use crate::osp::OspError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EalsError {
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Osp(#[from] OspError),
    #[error("malformed input: {0}")]
    Shape(String),
    #[error("{0} does not act diagonally on the basis")]
    NotToral(String),
    #[error("{0} is not represented by an element of h")]
    NotRepresentable(String),
    #[error("{0} is isotropic")]
    NotReal(String),
    #[error("no sl2-super-triple at {0}")]
    NoSl2Pair(String),
    #[error("hypothesis fails: {label} {witnesses:?}")]
    Hypothesis { label: String, witnesses: Vec<String> },
}
