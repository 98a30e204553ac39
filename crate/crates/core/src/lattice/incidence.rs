use serde::Serialize;

use super::index::{enumerate_partitions, LatticeIndex};
use crate::error::Result;
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IncidenceKind {
    Zeta,
    Mobius,
}

/// Zeta or Möbius matrix of Π(m), indexed by [`LatticeIndex`] order.
///
/// Zeta: `entry(σ, π) = 1` iff `π ≤ σ`, so the coarsest row is all ones.
/// Möbius: the exact inverse of zeta.
#[derive(Clone, Debug, Serialize)]
pub struct IncidenceMatrix {
    pub m: usize,
    pub kind: IncidenceKind,
    pub entries: DenseMatrix<i64>,
}

impl IncidenceMatrix {
    pub fn zeta(index: &LatticeIndex) -> Self {
        let n = index.len();
        let mut entries = DenseMatrix::zeros(n, n);
        for (col, ups) in index.coarsening_lists().iter().enumerate() {
            for &row in ups {
                entries.set(row, col, 1);
            }
        }
        Self { m: index.m(), kind: IncidenceKind::Zeta, entries }
    }

    /// Inverse of zeta by forward substitution over the refinement lists,
    /// in integer arithmetic.
    pub fn mobius(index: &LatticeIndex) -> Self {
        let n = index.len();
        let mut below: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (finer, ups) in index.coarsening_lists().iter().enumerate() {
            for &coarser in ups {
                if coarser != finer {
                    below[coarser].push(finer);
                }
            }
        }
        // Row i of zeta * M = e_i:  M[i][j] = δ_ij - Σ_{k < i, k ≤ i} M[k][j].
        let mut entries = DenseMatrix::<i64>::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut v = if i == j { 1 } else { 0 };
                for &k in &below[i] {
                    v -= *entries.get(k, j);
                }
                entries.set(i, j, v);
            }
        }
        Self { m: index.m(), kind: IncidenceKind::Mobius, entries }
    }

    pub fn to_scalar<T: Scalar>(&self) -> DenseMatrix<T> {
        self.entries.map(|&v| T::from_i64(v))
    }
}

pub fn zeta_matrix(m: usize) -> Result<IncidenceMatrix> {
    Ok(IncidenceMatrix::zeta(&enumerate_partitions(m)?))
}

pub fn mobius_matrix(m: usize) -> Result<IncidenceMatrix> {
    Ok(IncidenceMatrix::mobius(&enumerate_partitions(m)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_three_rows() {
        let z = zeta_matrix(3).unwrap().entries;
        assert_eq!(z.row(4), &[1, 1, 1, 1, 1]);
        assert_eq!(z.row(1), &[1, 1, 0, 0, 0]);
        let mu = mobius_matrix(3).unwrap().entries;
        assert_eq!(mu.row(4), &[2, -1, -1, -1, 1]);
        assert_eq!(mu.row(2), &[-1, 0, 1, 0, 0]);
    }

    #[test]
    fn order_two_mobius() {
        assert_eq!(mobius_matrix(2).unwrap().entries.to_rows(), vec![vec![1, 0], vec![-1, 1]]);
        assert_eq!(mobius_matrix(1).unwrap().entries.to_rows(), vec![vec![1]]);
    }

    #[test]
    fn mobius_inverts_zeta() {
        for m in 1..=7 {
            let idx = enumerate_partitions(m).unwrap();
            let z = IncidenceMatrix::zeta(&idx).entries;
            let mu = IncidenceMatrix::mobius(&idx).entries;
            assert!(z.is_lower_triangular() && mu.is_lower_triangular());
            assert_eq!(z.matmul(&mu).unwrap(), DenseMatrix::identity(idx.len()), "m = {m}");
        }
    }

    #[test]
    fn finest_to_coarsest_mobius_value() {
        for m in 1..=6usize {
            let mu = mobius_matrix(m).unwrap().entries;
            let n = mu.rows();
            let factorial: i64 = (1..m as i64).product();
            let sign = if m % 2 == 1 { 1 } else { -1 };
            assert_eq!(*mu.get(n - 1, 0), sign * factorial, "m = {m}");
        }
    }
}
