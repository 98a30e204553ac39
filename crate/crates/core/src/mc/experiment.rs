use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use super::chain::{replica_rng, resample};
use super::coefficients::EstimatorCoefficients;
use super::estimate::{run_replicas, McReport};
use crate::debias::{exact_bias, BiasMode};
use crate::error::{Error, Result};
use crate::moments::{Dataset, Label, MomentPolynomial, MomentSource, NormalPopulation};
use crate::scalar::Scalar;

/// A population with known ground truth that can also be sampled.
#[derive(Clone, Debug)]
pub enum Population<T> {
    /// A large dataset treated as the population; samples are resamples of it.
    Empirical(Dataset<T>),
    Normal(NormalPopulation<T>),
}

impl<T: Scalar> Population<T> {
    pub fn d(&self) -> usize {
        match self {
            Population::Empirical(x) => x.d(),
            Population::Normal(p) => p.mean.len(),
        }
    }

    fn to_f64(&self) -> Population<f64> {
        match self {
            Population::Empirical(x) => Population::Empirical(dataset_to_f64(x)),
            Population::Normal(p) => Population::Normal(NormalPopulation {
                mean: p.mean.iter().map(Scalar::to_f64).collect(),
                variance: p.variance.iter().map(Scalar::to_f64).collect(),
            }),
        }
    }
}

impl<T: Scalar> MomentSource<T> for Population<T> {
    fn d(&self) -> usize {
        Population::d(self)
    }

    fn moment(&self, block: &[Label]) -> Result<T> {
        match self {
            Population::Empirical(x) => x.moment(block),
            Population::Normal(p) => p.moment(block),
        }
    }
}

impl Population<f64> {
    /// `n` independent draws.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Dataset<f64>> {
        match self {
            Population::Empirical(x) => {
                let rows: Vec<usize> = (0..n).map(|_| rng.random_range(0..x.n())).collect();
                Ok(x.select_rows(&rows))
            }
            Population::Normal(p) => sample_normal(p, n, rng),
        }
    }
}

/// `n` rows from independent normal coordinates.
pub fn sample_normal<R: Rng + ?Sized>(p: &NormalPopulation<f64>, n: usize, rng: &mut R) -> Result<Dataset<f64>> {
    let dists = p
        .mean
        .iter()
        .zip(&p.variance)
        .map(|(m, v)| Normal::new(*m, v.sqrt()).map_err(|e| Error::InvalidInput(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new((0..n).map(|_| dists.iter().map(|d| d.sample(rng)).collect()).collect())
}

pub fn dataset_to_f64<T: Scalar>(x: &Dataset<T>) -> Dataset<f64> {
    Dataset::new(x.rows().map(|r| r.iter().map(Scalar::to_f64).collect()).collect())
        .expect("same shape as a valid dataset")
}

/// One line of a bias experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BiasExperimentRow {
    pub k: usize,
    pub coefficients: Vec<f64>,
    /// Mean of `Σ_j a_j F(X^{j+1}) − F(population)`; its target is the exact bias.
    pub report: McReport,
    pub exact_bias: f64,
    pub bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BiasExperiment {
    pub n: u64,
    pub truth: f64,
    pub rows: Vec<BiasExperimentRow>,
}

/// Empirical bias of the corrected estimators for `k = 0..=k_max`, next to
/// the exact bias and the worst-case bound. Each replica draws `X¹` from the
/// population and one chain shared by every `k`.
pub fn bias_experiment<T: Scalar>(
    f: &MomentPolynomial<T>,
    population: &Population<T>,
    n: u64,
    k_max: usize,
    replicas: usize,
    mode: &BiasMode<T>,
    seed: u64,
) -> Result<BiasExperiment> {
    if replicas == 0 {
        return Err(Error::InvalidInput("replicas must be at least 1".into()));
    }
    if let Population::Empirical(x) = population {
        if x.n() == 0 {
            return Err(Error::InvalidInput("population dataset has no rows".into()));
        }
    }
    let exact = exact_bias(f, n, k_max, population, mode)?;
    let truth = f.evaluate(population)?.to_f64();
    let coeffs: Vec<Vec<f64>> = (0..=k_max)
        .map(|k| {
            let c = match mode {
                BiasMode::Stationary => EstimatorCoefficients::<T>::stationary(k),
                BiasMode::Schedule(s) => EstimatorCoefficients::from_etas(&s.etas[..k]),
            };
            c.to_f64().coeffs
        })
        .collect();

    let f64_poly = f.to_f64();
    let pop = population.to_f64();
    let levels: Vec<Vec<f64>> = run_replicas(replicas, |replica| {
        let mut rng = replica_rng(seed, replica as u64);
        let mut x = pop.sample(n as usize, &mut rng)?;
        let mut values = Vec::with_capacity(k_max + 1);
        for j in 0..=k_max {
            if j > 0 {
                x = resample(&x, &mut rng);
            }
            values.push(f64_poly.evaluate(&x)?);
        }
        Ok(values)
    })?;

    let rows = exact
        .records
        .iter()
        .zip(&coeffs)
        .map(|(record, a)| {
            let biases: Vec<f64> =
                levels.iter().map(|v| a.iter().zip(v).map(|(a, v)| a * v).sum::<f64>() - truth).collect();
            let exact_bias = record.signed_bias.to_f64();
            BiasExperimentRow {
                k: record.k,
                coefficients: a.clone(),
                report: McReport::from_values(&biases, Some(exact_bias), seed),
                exact_bias,
                bound: record.bound,
            }
        })
        .collect();
    Ok(BiasExperiment { n, truth, rows })
}

impl BiasExperiment {
    /// Columns `k, replicas, estimate, std_error, exact_bias, bound, seed`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "replicas", "estimate", "std_error", "exact_bias", "bound", "seed"])?;
        for r in &self.rows {
            w.write_record([
                r.k.to_string(),
                r.report.replicas.to_string(),
                r.report.estimate.to_string(),
                r.report.std_error.to_string(),
                r.exact_bias.to_string(),
                r.bound.map(|b| b.to_string()).unwrap_or_default(),
                r.report.seed.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
