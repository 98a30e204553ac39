//! Exact-arithmetic invariant suite run by `mobius-boot selftest`.

use serde::Serialize;

use crate::debias::{richardson_debias, richardson_neumann, schedule_bias_vector, StepSchedule};
use crate::error::Result;
use crate::lattice::{bell, enumerate_partitions, stirling2, IncidenceMatrix};
use crate::matrix::DenseMatrix;
use crate::mc::{exhaustive_estimate, exhaustive_resample_mean, ChainStart, EstimatorCoefficients};
use crate::moments::{cumulants_from_moments, moments_from_cumulants, Dataset, MomentPolynomial};
use crate::resampling::{
    apply_s, factorization_with, level_sums, one_norm_closed_form, one_norm_direct, reduced_matrix, SamplingMatrix,
};
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

type Outcome = Result<std::result::Result<String, String>>;

/// Runs every check; a check that errors counts as failed.
pub fn run() -> SelftestReport {
    let suite: [(&'static str, fn() -> Outcome); 11] = [
        ("lattice_counts", lattice_counts),
        ("zeta_mobius_inverse", zeta_mobius_inverse),
        ("moment_cumulant_roundtrip", moment_cumulant_roundtrip),
        ("sampling_columns_stochastic", sampling_columns_stochastic),
        ("one_norm_closed_form", one_norm_closed_form_check),
        ("factorization", factorization_check),
        ("reduced_matrix", reduced_matrix_check),
        ("apply_s_matches_matrix", apply_s_matches_matrix),
        ("richardson_neumann", richardson_neumann_check),
        ("default_schedule_unbiased", default_schedule_unbiased),
        ("exhaustive_oracle", exhaustive_oracle),
    ];
    let checks = suite
        .into_iter()
        .map(|(name, check)| match check() {
            Ok(Ok(detail)) => Check { name, passed: true, detail },
            Ok(Err(detail)) => Check { name, passed: false, detail },
            Err(e) => Check { name, passed: false, detail: e.to_string() },
        })
        .collect();
    SelftestReport { checks }
}

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

fn sample_vector(len: usize, salt: i64) -> Vec<Rational> {
    (0..len as i64).map(|i| q((7 * i + 3 * salt) % 11 - 5, (i + salt) % 4 + 1)).collect()
}

fn lattice_counts() -> Outcome {
    for m in 1..=7 {
        let index = enumerate_partitions(m)?;
        if bell(m) != index.len().into() {
            return Ok(Err(format!("m = {m}: {} partitions, Bell = {}", index.len(), bell(m))));
        }
        let counts = index.block_counts();
        for k in 1..=m {
            if stirling2(m, k) != counts.iter().filter(|&&c| c == k).count().into() {
                return Ok(Err(format!("m = {m}: level {k} size differs from S2({m}, {k})")));
            }
        }
    }
    Ok(Ok("m <= 7".into()))
}

fn zeta_mobius_inverse() -> Outcome {
    for m in 1..=5 {
        let index = enumerate_partitions(m)?;
        let z = IncidenceMatrix::zeta(&index).entries;
        let mu = IncidenceMatrix::mobius(&index).entries;
        if z.matmul(&mu)? != DenseMatrix::identity(index.len()) {
            return Ok(Err(format!("m = {m}: zeta · mobius is not the identity")));
        }
    }
    Ok(Ok("m <= 5".into()))
}

fn moment_cumulant_roundtrip() -> Outcome {
    for m in 1..=4 {
        let index = enumerate_partitions(m)?;
        let kappa = sample_vector(index.len(), m as i64);
        let mu = moments_from_cumulants(&index, &kappa)?;
        if cumulants_from_moments(&index, &mu)? != kappa {
            return Ok(Err(format!("m = {m}: round trip changed the vector")));
        }
    }
    Ok(Ok("m <= 4".into()))
}

fn sampling_columns_stochastic() -> Outcome {
    for m in 1..=4 {
        let index = enumerate_partitions(m)?;
        for n in 1..=6 {
            let s = SamplingMatrix::<Rational>::new(&index, n)?;
            for j in 0..index.len() {
                let total = s.entries.column(j).into_iter().fold(q(0, 1), |a, b| a + b);
                if total != q(1, 1) {
                    return Ok(Err(format!("m = {m}, N = {n}: column {j} sums to {total}")));
                }
            }
        }
    }
    Ok(Ok("m <= 4, N <= 6".into()))
}

fn one_norm_closed_form_check() -> Outcome {
    for m in 1..=4 {
        for n in 1..=6 {
            let direct = one_norm_direct::<Rational>(m, n)?;
            let closed = one_norm_closed_form::<Rational>(m, n);
            if direct != closed {
                return Ok(Err(format!("m = {m}, N = {n}: {direct} != {closed}")));
            }
        }
    }
    Ok(Ok("m <= 4, N <= 6".into()))
}

fn factorization_check() -> Outcome {
    for m in 1..=4 {
        let index = enumerate_partitions(m)?;
        for n in 1..=5 {
            if !factorization_with(&SamplingMatrix::<Rational>::new(&index, n)?)?.check {
                return Ok(Err(format!("m = {m}, N = {n}: S != R zeta C^-1")));
            }
        }
    }
    Ok(Ok("S = R zeta C^-1 for m <= 4, N <= 5".into()))
}

fn reduced_matrix_check() -> Outcome {
    for m in 1..=4 {
        let index = enumerate_partitions(m)?;
        for n in 1..=5 {
            let s = SamplingMatrix::<Rational>::new(&index, n)?;
            let reduced = reduced_matrix::<Rational>(m, n)?;
            let f = sample_vector(index.len(), (m + n as usize) as i64);
            if level_sums(&index, &s.apply(&f)?)? != reduced.apply(&level_sums(&index, &f)?)? {
                return Ok(Err(format!("m = {m}, N = {n}: level sums do not commute")));
            }
        }
    }
    Ok(Ok("m <= 4, N <= 5".into()))
}

fn apply_s_matches_matrix() -> Outcome {
    for m in 1..=4 {
        let index = enumerate_partitions(m)?;
        for n in 1..=4 {
            let s = SamplingMatrix::<Rational>::new(&index, n)?;
            let f = sample_vector(index.len(), m as i64 * 5 + n as i64);
            let p = MomentPolynomial::from_lattice_vector(&index, &f)?;
            if apply_s(&p, n)?.to_lattice_vector(&index)? != s.apply(&f)? {
                return Ok(Err(format!("m = {m}, N = {n}: polynomial and matrix actions differ")));
            }
        }
    }
    Ok(Ok("m <= 4, N <= 4".into()))
}

fn richardson_neumann_check() -> Outcome {
    let index = enumerate_partitions(3)?;
    let p = MomentPolynomial::from_lattice_vector(&index, &sample_vector(index.len(), 2))?;
    for k in 0..=3 {
        if richardson_debias(&p, 4, k)? != richardson_neumann(&p, 4, k)? {
            return Ok(Err(format!("k = {k}: recursion and Neumann series differ")));
        }
    }
    Ok(Ok("m = 3, N = 4, k <= 3".into()))
}

fn default_schedule_unbiased() -> Outcome {
    for m in 1..=4 {
        let index = enumerate_partitions(m)?;
        for n in m as u64..=m as u64 + 2 {
            let s = SamplingMatrix::<Rational>::new(&index, n)?;
            let etas = StepSchedule::<Rational>::default_for(n, m)?.etas;
            for j in 0..index.len() {
                let mut e = vec![q(0, 1); index.len()];
                e[j] = q(1, 1);
                if schedule_bias_vector(&s, &etas, &e)?.iter().any(|v| *v != q(0, 1)) {
                    return Ok(Err(format!("m = {m}, N = {n}: basis vector {j} keeps a bias")));
                }
            }
        }
    }
    Ok(Ok("m <= 4, N in m..m+2".into()))
}

fn exhaustive_oracle() -> Outcome {
    for n in 2..=3usize {
        let rows: Vec<Vec<Rational>> = (0..n as i64).map(|i| vec![q(2 * i - 1, 1), q(i * i + 1, 2), q(3 - i, 4)]).collect();
        let data = Dataset::new(rows)?;
        let index = enumerate_partitions(3)?;
        let f = sample_vector(index.len(), n as i64);
        let p = MomentPolynomial::from_lattice_vector(&index, &f)?;
        let once = exhaustive_resample_mean(&p, &data)?;
        if once != apply_s(&p, n as u64)?.evaluate(&data)? {
            return Ok(Err(format!("N = {n}: resample average differs from apply_s")));
        }
        let coeffs = EstimatorCoefficients::<Rational>::stationary(1);
        let chain = exhaustive_estimate(&p, &data, &coeffs, ChainStart::Resample)?;
        let expected = apply_s(&richardson_debias(&p, n as u64, 1)?, n as u64)?.evaluate(&data)?;
        if chain != expected {
            return Ok(Err(format!("N = {n}: two-level chain average differs from S f^(1)")));
        }
    }
    Ok(Ok("N in {2, 3}, m = 3".into()))
}
