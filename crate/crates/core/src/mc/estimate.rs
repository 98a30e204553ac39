use rayon::prelude::*;
use serde::Serialize;

use super::chain::{all_index_vectors, replica_rng, resample};
use super::coefficients::EstimatorCoefficients;
use crate::error::{Error, Result};
use crate::moments::{Dataset, MomentPolynomial};
use crate::scalar::Scalar;

/// A statistic computed from a dataset and nothing else.
pub trait Functional<T>: Sync {
    fn evaluate(&self, data: &Dataset<T>) -> Result<T>;
}

impl<T: Scalar> Functional<T> for MomentPolynomial<T> {
    fn evaluate(&self, data: &Dataset<T>) -> Result<T> {
        MomentPolynomial::evaluate(self, data)
    }
}

/// Wraps a closure as a [`Functional`].
pub struct FnFunctional<F>(pub F);

impl<T, F> Functional<T> for FnFunctional<F>
where
    F: Fn(&Dataset<T>) -> Result<T> + Sync,
{
    fn evaluate(&self, data: &Dataset<T>) -> Result<T> {
        (self.0)(data)
    }
}

/// Where a chain starts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainStart {
    /// `X¹` is the given dataset.
    #[default]
    Data,
    /// `X¹` is one resample of the given dataset.
    Resample,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McReport {
    pub replicas: usize,
    pub estimate: f64,
    /// Sample standard deviation over `√replicas`; NaN for a single replica.
    pub std_error: f64,
    pub target: Option<f64>,
    pub seed: u64,
}

impl McReport {
    pub fn from_values(values: &[f64], target: Option<f64>, seed: u64) -> Self {
        let r = values.len();
        let mean = values.iter().sum::<f64>() / r as f64;
        let std_error = if r > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
            (ss / (r - 1) as f64).sqrt() / (r as f64).sqrt()
        } else {
            f64::NAN
        };
        Self { replicas: r, estimate: mean, std_error, target, seed }
    }

    /// `|estimate − target| / std_error`, when both are available.
    pub fn z_score(&self) -> Option<f64> {
        self.target.map(|t| (self.estimate - t).abs() / self.std_error)
    }
}

/// Monte Carlo average of `Σ_j a_j F(X^{j+1})` over independent chains.
pub fn mc_estimate<F: Functional<f64>>(
    f: &F,
    data: &Dataset<f64>,
    coeffs: &EstimatorCoefficients<f64>,
    replicas: usize,
    seed: u64,
    start: ChainStart,
) -> Result<McReport> {
    if replicas == 0 {
        return Err(Error::InvalidInput("replicas must be at least 1".into()));
    }
    if data.n() == 0 {
        return Err(Error::InvalidInput("dataset has no rows".into()));
    }
    let values = run_replicas(replicas, |replica| {
        let mut rng = replica_rng(seed, replica as u64);
        let mut x = match start {
            ChainStart::Data => data.clone(),
            ChainStart::Resample => resample(data, &mut rng),
        };
        let mut total = 0.0;
        for (j, a) in coeffs.coeffs.iter().enumerate() {
            if j > 0 {
                x = resample(&x, &mut rng);
            }
            if *a != 0.0 {
                total += a * f.evaluate(&x)?;
            }
        }
        Ok(total)
    })?;
    Ok(McReport::from_values(&values, None, seed))
}

/// Runs `job` for every replica in parallel; values come back in replica
/// order and the first failing replica is reported.
pub(crate) fn run_replicas<V, J>(replicas: usize, job: J) -> Result<Vec<V>>
where
    V: Send,
    J: Fn(usize) -> Result<V> + Sync,
{
    let results: Vec<Result<V>> = (0..replicas).into_par_iter().map(&job).collect();
    results
        .into_iter()
        .enumerate()
        .map(|(replica, r)| {
            r.map_err(|e| match e {
                Error::Functional { .. } => e,
                other => Error::Functional { replica, message: other.to_string() },
            })
        })
        .collect()
}

/// Largest number of functional evaluations exhaustive mode will attempt.
pub const EXHAUSTIVE_LIMIT: u64 = 20_000_000;

/// Exact expectation of `Σ_j a_j F(X^{j+1})` by enumerating every chain.
pub fn exhaustive_estimate<T: Scalar, F: Functional<T>>(
    f: &F,
    data: &Dataset<T>,
    coeffs: &EstimatorCoefficients<T>,
    start: ChainStart,
) -> Result<T> {
    let n = data.n();
    if n == 0 {
        return Err(Error::InvalidInput("dataset has no rows".into()));
    }
    let mut a = coeffs.coeffs.clone();
    if start == ChainStart::Resample {
        a.insert(0, T::zero());
    }
    let levels = a.len().saturating_sub(1) as u32;
    let count = (n as u64).checked_pow(n as u32).and_then(|b| b.checked_pow(levels));
    if count.is_none_or(|c| c > EXHAUSTIVE_LIMIT) {
        return Err(Error::Infeasible(format!(
            "exhaustive enumeration of {levels} resampling levels at N = {n} exceeds {EXHAUSTIVE_LIMIT} chains"
        )));
    }
    let vectors: Vec<Vec<usize>> = all_index_vectors(n).collect();
    let weight = T::one() / T::from_u64((n as u64).pow(n as u32));
    chain_expectation(f, data, &a, &vectors, &weight)
}

fn chain_expectation<T: Scalar, F: Functional<T>>(
    f: &F,
    x: &Dataset<T>,
    a: &[T],
    vectors: &[Vec<usize>],
    weight: &T,
) -> Result<T> {
    let Some((head, tail)) = a.split_first() else {
        return Ok(T::zero());
    };
    let mut total = if head.is_zero() { T::zero() } else { head.clone() * f.evaluate(x)? };
    if tail.iter().any(|c| !c.is_zero()) {
        let mut sum = T::zero();
        for v in vectors {
            sum += chain_expectation(f, &x.select_rows(v), tail, vectors, weight)?;
        }
        total += sum * weight.clone();
    }
    Ok(total)
}

/// `E[F(X²)]` over every resample of `data`.
pub fn exhaustive_resample_mean<T: Scalar, F: Functional<T>>(f: &F, data: &Dataset<T>) -> Result<T> {
    let coeffs = EstimatorCoefficients { coeffs: vec![T::zero(), T::one()] };
    exhaustive_estimate(f, data, &coeffs, ChainStart::Data)
}
