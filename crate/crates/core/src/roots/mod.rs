//! Weights, symmetric forms, locally finite root (super)systems and their
//! axiom checks, even/odd partitions and radical projections.

mod ears;
mod generate;
mod lattice;
mod radical;
mod rootset;
mod weight;

pub use ears::{check_ears, gram_rank, AxiomVerdict, EarsReport};
pub use generate::{fundamental_weights, gen_locally_finite, gen_supersystem, FiniteType, SuperRow};
pub use lattice::Lattice;
pub use radical::{project_radical, FiberInclusions, RadicalDecomposition};
pub use rootset::{
    connected_components, partition_even_odd, reflect, root_string, weyl_closure, weyl_invariant, LengthClasses, RootSet,
    RootSetJson, RootString,
};
pub use weight::{Symbol, SymmetricForm, Weight};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("cannot parse {0:?}")]
    ParseSymbol(String),
    #[error("rank {rank} is below the minimum {min} for type {kind}")]
    RankTooSmall { kind: String, rank: usize, min: usize },
    #[error("root {0} is isotropic; no reflection exists")]
    Isotropic(String),
    #[error("unsupported row: {0}")]
    UnsupportedRow(String),
    #[error("BC(T,T') input lacks its component decomposition")]
    MissingComponents,
    #[error("orbit closure exceeded {0} elements")]
    OrbitTooLarge(usize),
}
