//! The partition lattice Π(m): enumeration, refinement order, incidence
//! matrices, and the counting numbers attached to it.

mod incidence;
mod index;
pub mod numbers;
mod partition;

pub use incidence::{mobius_matrix, zeta_matrix, IncidenceKind, IncidenceMatrix};
pub use index::{enumerate_partitions, enumerate_partitions_with_cap, LatticeIndex, DEFAULT_CAP};
pub use numbers::{bell, falling_factorial, stirling2};
pub use partition::Partition;

pub(crate) use index::check_order;
pub(crate) use partition::RgsIter;
