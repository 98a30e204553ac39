use super::schedule::StepSchedule;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::moments::MomentPolynomial;
use crate::resampling::{apply_s, SamplingMatrix};
use crate::scalar::Scalar;

/// `f^{(k)}` of the iterated bootstrap, by the recursion
/// `f^{(j+1)} = f^{(j)} + (f − S f^{(j)})`.
pub fn richardson_debias<T: Scalar>(f: &MomentPolynomial<T>, n: u64, k: usize) -> Result<MomentPolynomial<T>> {
    let mut g = f.clone();
    for _ in 0..k {
        g = g.add(&f.sub(&apply_s(&g, n)?)?)?;
    }
    Ok(g)
}

/// `f^{(k)}` as the truncated Neumann series `Σ_{i=0}^k (Id − S)^i f`.
pub fn richardson_neumann<T: Scalar>(f: &MomentPolynomial<T>, n: u64, k: usize) -> Result<MomentPolynomial<T>> {
    let mut power = f.clone();
    let mut total = f.clone();
    for _ in 0..k {
        power = power.sub(&apply_s(&power, n)?)?;
        total = total.add(&power)?;
    }
    Ok(total)
}

/// Scheduled bootstrap `G_j = G_{j−1} + η_j (f − S G_{j−1})`, `G_0 = f`;
/// its bias `S G_k − f` is `Π (Id − η_i S)(S f − f)`.
pub fn nonstationary_debias<T: Scalar>(
    f: &MomentPolynomial<T>,
    n: u64,
    schedule: &StepSchedule<T>,
) -> Result<MomentPolynomial<T>> {
    check_schedule(n, schedule)?;
    let mut g = f.clone();
    for eta in &schedule.etas {
        g = step(f, &g, n, eta)?;
    }
    Ok(g)
}

pub(crate) fn step<T: Scalar>(
    f: &MomentPolynomial<T>,
    g: &MomentPolynomial<T>,
    n: u64,
    eta: &T,
) -> Result<MomentPolynomial<T>> {
    g.add(&f.sub(&apply_s(g, n)?)?.scale(eta))
}

pub(crate) fn check_schedule<T>(n: u64, schedule: &StepSchedule<T>) -> Result<()> {
    if schedule.n != n {
        return Err(Error::InvalidInput(format!("schedule built for N = {}, used with N = {n}", schedule.n)));
    }
    Ok(())
}

/// `Π_i (Id − η_i S) (S f − f)` on a coefficient vector over Π(m).
pub fn schedule_bias_vector<T: Scalar>(s: &SamplingMatrix<T>, etas: &[T], f: &[T]) -> Result<Vec<T>> {
    let sf = s.apply(f)?;
    let mut b: Vec<T> = sf.into_iter().zip(f).map(|(a, b)| a - b.clone()).collect();
    for eta in etas {
        let sb = s.apply(&b)?;
        b = b.into_iter().zip(sb).map(|(x, y)| x - eta.clone() * y).collect();
    }
    Ok(b)
}

/// `S f^{(k)} − f` with `f^{(k)}` from the Richardson recursion.
pub fn stationary_bias_vector<T: Scalar>(s: &SamplingMatrix<T>, f: &[T], k: usize) -> Result<Vec<T>> {
    let mut g = f.to_vec();
    for _ in 0..k {
        let sg = s.apply(&g)?;
        g = g.iter().zip(f).zip(sg).map(|((g, f), sg)| g.clone() + f.clone() - sg).collect();
    }
    Ok(s.apply(&g)?.into_iter().zip(f).map(|(a, b)| a - b.clone()).collect())
}

/// `(Id − S)^k` by repeated multiplication.
pub fn id_minus_s_power<T: Scalar>(s: &SamplingMatrix<T>, k: usize) -> Result<DenseMatrix<T>> {
    let base = s.id_minus();
    let mut out = DenseMatrix::identity(base.rows());
    for _ in 0..k {
        out = out.matmul(&base)?;
    }
    Ok(out)
}
