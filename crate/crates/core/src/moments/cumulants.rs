//! Moment ↔ cumulant conversion over Π(m) in the unlabeled case.
//!
//! Vectors are indexed by [`LatticeIndex`] order and hold multiplicative
//! quantities: `μ_π = Π_{B ∈ π} μ_B`, likewise for κ. Then `μ = ζ κ` and
//! `κ = Möbius · μ`.

use crate::error::{Error, Result};
use crate::lattice::{IncidenceMatrix, LatticeIndex};
use crate::scalar::Scalar;

pub fn moments_from_cumulants<T: Scalar>(index: &LatticeIndex, kappa: &[T]) -> Result<Vec<T>> {
    check_len(index, kappa)?;
    IncidenceMatrix::zeta(index).to_scalar::<T>().matvec(kappa)
}

pub fn cumulants_from_moments<T: Scalar>(index: &LatticeIndex, mu: &[T]) -> Result<Vec<T>> {
    check_len(index, mu)?;
    IncidenceMatrix::mobius(index).to_scalar::<T>().matvec(mu)
}

/// `v_π = Π_{B ∈ π} block_value(B)`, blocks given as 0-based positions.
pub fn product_vector<T: Scalar>(index: &LatticeIndex, mut block_value: impl FnMut(&[usize]) -> T) -> Vec<T> {
    index
        .iter()
        .map(|p| p.blocks().iter().fold(T::one(), |acc, b| acc * block_value(b)))
        .collect()
}

fn check_len<T>(index: &LatticeIndex, v: &[T]) -> Result<()> {
    if v.len() != index.len() {
        return Err(Error::Dimension { expected: index.len(), found: v.len() });
    }
    Ok(())
}
