use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::numbers::power;
use crate::lattice::{enumerate_partitions, falling_factorial, stirling2, IncidenceMatrix, LatticeIndex};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

/// The matrix of one resampling round on coefficient vectors over Π(m):
/// `entry(π, σ) = falling(N, #π) / N^{#σ}` when `σ ≤ π`, else 0.
#[derive(Clone, Debug)]
pub struct SamplingMatrix<T> {
    pub n: u64,
    pub index: LatticeIndex,
    pub entries: DenseMatrix<T>,
}

impl<T: Scalar> SamplingMatrix<T> {
    pub fn new(index: &LatticeIndex, n: u64) -> Result<Self> {
        check_n(n)?;
        let len = index.len();
        let m = index.m();
        let falling: Vec<T> = (0..=m as u64).map(|k| T::from_bigint(&falling_factorial(n, k))).collect();
        let inv_pow: Vec<T> =
            (0..=m as u64).map(|k| T::from_ratio(&1.into(), &power(n, k))).collect();
        let counts = index.block_counts();
        let mut entries = DenseMatrix::zeros(len, len);
        for (col, ups) in index.coarsening_lists().iter().enumerate() {
            for &row in ups {
                entries.set(row, col, falling[counts[row]].clone() * inv_pow[counts[col]].clone());
            }
        }
        Ok(Self { n, index: index.clone(), entries })
    }

    pub fn m(&self) -> usize {
        self.index.m()
    }

    pub fn apply(&self, f: &[T]) -> Result<Vec<T>> {
        self.entries.matvec(f)
    }

    /// `Id − S`.
    pub fn id_minus(&self) -> DenseMatrix<T> {
        DenseMatrix::identity(self.index.len()).sub(&self.entries).expect("square")
    }
}

pub fn sampling_matrix<T: Scalar>(m: usize, n: u64) -> Result<SamplingMatrix<T>> {
    SamplingMatrix::new(&enumerate_partitions(m)?, n)
}

pub(crate) fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("sample count N must be positive".into()));
    }
    Ok(())
}

/// Diagonal scalings relating `S` to the zeta matrix.
///
/// `r[π] = falling(N, #π)` counts respecting index maps and `c[π] = N^{#π}`
/// counts constant ones. `literal_check` tests `S = C⁻¹ ζ R`; `check`
/// tests `S = R ζ C⁻¹`, the arrangement matching the entries of `S`.
#[derive(Clone, Debug, Serialize)]
pub struct Factorization<T> {
    pub r: Vec<T>,
    pub c: Vec<T>,
    pub literal_check: bool,
    pub check: bool,
}

pub fn factorization<T: Scalar>(m: usize, n: u64) -> Result<Factorization<T>> {
    let index = enumerate_partitions(m)?;
    factorization_with(&SamplingMatrix::new(&index, n)?)
}

pub fn factorization_with<T: Scalar>(s: &SamplingMatrix<T>) -> Result<Factorization<T>> {
    let counts = s.index.block_counts();
    let r: Vec<T> = counts.iter().map(|&k| T::from_bigint(&falling_factorial(s.n, k as u64))).collect();
    let c: Vec<T> = counts.iter().map(|&k| T::from_bigint(&power(s.n, k as u64))).collect();
    let c_inv: Vec<T> = c.iter().map(|v| T::one() / v.clone()).collect();
    let zeta = IncidenceMatrix::zeta(&s.index).to_scalar::<T>();

    let literal = DenseMatrix::diagonal(&c_inv).matmul(&zeta)?.matmul(&DenseMatrix::diagonal(&r))?;
    let corrected = DenseMatrix::diagonal(&r).matmul(&zeta)?.matmul(&DenseMatrix::diagonal(&c_inv))?;
    Ok(Factorization { literal_check: literal == s.entries, check: corrected == s.entries, r, c })
}

/// `Š`: the action of `S` on level sums, levels `1..=m` as indices `0..m`.
#[derive(Clone, Debug, Serialize)]
pub struct ReducedMatrix<T> {
    pub m: usize,
    pub n: u64,
    pub entries: DenseMatrix<T>,
}

pub fn reduced_matrix<T: Scalar>(m: usize, n: u64) -> Result<ReducedMatrix<T>> {
    if m == 0 {
        return Err(Error::EmptyOrder);
    }
    check_n(n)?;
    let entries = DenseMatrix::from_fn(m, m, |i, j| {
        let (i, j) = (i + 1, j + 1);
        if i > j {
            return T::zero();
        }
        T::from_ratio(&(stirling2(j, i) * falling_factorial(n, i as u64)), &power(n, j as u64))
    });
    Ok(ReducedMatrix { m, n, entries })
}

impl<T: Scalar> ReducedMatrix<T> {
    pub fn apply(&self, sums: &[T]) -> Result<Vec<T>> {
        self.entries.matvec(sums)
    }
}

/// Sums of coefficients per block count: entry `i` collects `#π = i + 1`.
pub fn level_sums<T: Scalar>(index: &LatticeIndex, f: &[T]) -> Result<Vec<T>> {
    if f.len() != index.len() {
        return Err(Error::Dimension { expected: index.len(), found: f.len() });
    }
    let mut sums = vec![T::zero(); index.m()];
    for (k, v) in index.block_counts().into_iter().zip(f) {
        sums[k - 1] += v.clone();
    }
    Ok(sums)
}
