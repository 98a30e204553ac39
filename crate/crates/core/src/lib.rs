//! Bootstrap bias correction viewed as Möbius inversion on the partition
//! lattice.
//!
//! The resampling operator maps moment polynomials of order `m` to
//! themselves, acting on coefficient vectors over Π(m) as a lower
//! triangular matrix `S`. Iterated bootstrap is Richardson iteration for
//! `S f = g`; a scheduled (nonstationary) variant removes the bias of any
//! order-`m` moment polynomial in `m` steps.

pub mod debias;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod mc;
pub mod moments;
pub mod resampling;
pub mod scalar;
pub mod selftest;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
