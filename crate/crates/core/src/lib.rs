//! Exact construction and certification of orthosymplectic Lie superalgebras,
//! locally finite root supersystems, root-graded Lie superalgebras and their
//! affinizations.

pub mod cli;
pub mod eals;
pub mod exactalg;
pub mod graded;
pub mod osp;
pub mod repn;
pub mod roots;
