//! The orthosymplectic superalgebra `g`, its second natural module `s` and
//! natural module `u`, built inside `gl` by solving the defining conditions.

mod casimir;
mod circ;
mod context;
mod sub;
mod table;

pub use casimir::{casimir, trace_form_invariant, Casimir};
pub use circ::{bracket_uu, circ_uu, circ_xy, id_mn, u_form};
pub use context::{
    build_context, expected_s_weights, expected_u_weights, index_weight, psi, root_set_r, satisfies_condition, u_pair, weight_form,
    weight_decompose, Carrier, Element, OspContext, WeightDecomposition, WeightedBasis,
};
pub use sub::{sub_context, SubContextReport, SubObjectCheck};
pub use table::{format_matrix, verify_span_table, RowStatus, RowVerdict, SpanTableReport};

use crate::exactalg::AlgError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OspError {
    #[error("m and n must be at least 1 (got m={m}, n={n})")]
    Rank { m: u32, n: u32 },
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error("basis element {0} is not an eigenvector of the Cartan subalgebra")]
    NotEigen(String),
    #[error("invariant form is degenerate: rank {rank} on a space of dimension {dim}")]
    DegenerateForm { rank: usize, dim: usize },
    #[error("no ordering of the Casimir sum commutes with the action")]
    CasimirNotCentral,
    #[error("sub-pair ({m}, {n}) does not fit inside ({outer_m}, {outer_n})")]
    SubPair { m: u32, n: u32, outer_m: u32, outer_n: u32 },
    #[error("action of {0} leaves the carrier")]
    NotClosed(String),
}
