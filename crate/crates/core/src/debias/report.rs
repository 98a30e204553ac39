use std::io::Write;

use serde_json::json;

use super::bounds::bias_bound;
use super::iterate::{check_schedule, step};
use super::schedule::StepSchedule;
use crate::error::{Error, Result};
use crate::moments::{MomentPolynomial, MomentSource};
use crate::resampling::{apply_s, coarsened_terms};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum BiasMode<T> {
    /// Iterated bootstrap, step size 1.
    Stationary,
    Schedule(StepSchedule<T>),
}

/// One iteration of a bias trajectory.
#[derive(Clone)]
pub struct BiasRecord<T> {
    pub k: usize,
    /// Coefficients of the corrected estimator after `k` steps.
    pub coefficients: MomentPolynomial<T>,
    /// `(S f^{(k)} − f)` evaluated on the population.
    pub signed_bias: T,
    pub abs_bias: T,
    /// Worst-case bound; stationary mode only.
    pub bound: Option<f64>,
}

#[derive(Clone)]
pub struct BiasReport<T> {
    pub n: u64,
    pub mode: BiasMode<T>,
    pub mu_inf: T,
    pub f_one: T,
    pub records: Vec<BiasRecord<T>>,
}

/// Exact bias of the corrected estimators after `0..=k` steps against a
/// population with known moments.
pub fn exact_bias<T: Scalar>(
    f: &MomentPolynomial<T>,
    n: u64,
    k: usize,
    population: &impl MomentSource<T>,
    mode: &BiasMode<T>,
) -> Result<BiasReport<T>> {
    if population.d() != f.d() {
        return Err(Error::Dimension { expected: f.d(), found: population.d() });
    }
    if let BiasMode::Schedule(schedule) = mode {
        check_schedule(n, schedule)?;
        if k > schedule.len() {
            return Err(Error::InvalidInput(format!("schedule has {} steps, asked for {k}", schedule.len())));
        }
    }

    let mut mu_inf = T::zero();
    for term in coarsened_terms(f)? {
        let one = MomentPolynomial::from_terms(f.d(), [(term, T::one())])?;
        let v = one.evaluate(population)?.abs();
        if v > mu_inf {
            mu_inf = v;
        }
    }
    let f_one = f.one_norm();
    let order = f.max_order();

    let mut records = Vec::with_capacity(k + 1);
    let mut g = f.clone();
    for j in 0..=k {
        if j > 0 {
            let eta = match mode {
                BiasMode::Stationary => T::one(),
                BiasMode::Schedule(s) => s.etas[j - 1].clone(),
            };
            g = step(f, &g, n, &eta)?;
        }
        let signed_bias = apply_s(&g, n)?.sub(f)?.evaluate(population)?;
        let bound = match mode {
            BiasMode::Stationary => Some(bias_bound(order, n, j, mu_inf.to_f64(), f_one.to_f64())),
            BiasMode::Schedule(_) => None,
        };
        records.push(BiasRecord { k: j, coefficients: g.clone(), abs_bias: signed_bias.abs(), signed_bias, bound });
    }
    Ok(BiasReport { n, mode: mode.clone(), mu_inf, f_one, records })
}

impl<T: Scalar> BiasReport<T> {
    pub fn to_json_value(&self) -> serde_json::Value {
        let (mode, etas) = match &self.mode {
            BiasMode::Stationary => ("stationary", Vec::new()),
            BiasMode::Schedule(s) => ("schedule", s.etas.iter().map(Scalar::to_text).collect()),
        };
        json!({
            "n": self.n,
            "mode": mode,
            "etas": etas,
            "mu_inf": self.mu_inf.to_text(),
            "f_one": self.f_one.to_text(),
            "records": self.records.iter().map(|r| json!({
                "k": r.k,
                "signed_bias": r.signed_bias.to_text(),
                "abs_bias": r.abs_bias.to_text(),
                "signed_bias_f64": r.signed_bias.to_f64(),
                "bound": r.bound,
                "coefficients": r.coefficients.to_json_value(),
            })).collect::<Vec<_>>(),
        })
    }

    /// Columns `k, signed_bias, abs_bias, bound`; the bound is empty in schedule mode.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "signed_bias", "abs_bias", "bound"])?;
        for r in &self.records {
            w.write_record([
                r.k.to_string(),
                r.signed_bias.to_text(),
                r.abs_bias.to_text(),
                r.bound.map(|b| b.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl<T: Scalar> std::fmt::Debug for BiasRecord<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BiasRecord")
            .field("k", &self.k)
            .field("coefficients", &self.coefficients)
            .field("signed_bias", &self.signed_bias.to_text())
            .field("bound", &self.bound)
            .finish()
    }
}

impl<T: Scalar> std::fmt::Debug for BiasReport<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BiasReport").field("n", &self.n).field("records", &self.records).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{LabeledTerm, MomentTable, NormalPopulation};
    use crate::scalar::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p.into(), d.into())
    }

    fn variance() -> MomentPolynomial<Rational> {
        let t = |b: Vec<Vec<u32>>| LabeledTerm::new(b).unwrap();
        MomentPolynomial::from_terms(1, [(t(vec![vec![0, 0]]), q(1, 1)), (t(vec![vec![0], vec![0]]), q(-1, 1))]).unwrap()
    }

    #[test]
    fn plug_in_variance_bias() {
        let pop = NormalPopulation::new(vec![q(2, 1)], vec![q(3, 1)]).unwrap();
        let report = exact_bias(&variance(), 10, 3, &pop, &BiasMode::Stationary).unwrap();
        let biases: Vec<Rational> = report.records.iter().map(|r| r.signed_bias.clone()).collect();
        // −σ²/N^{k+1}, since S v = (1 − 1/N) v.
        assert_eq!(biases, vec![q(-3, 10), q(-3, 100), q(-3, 1000), q(-3, 10000)]);
        for r in &report.records {
            assert!(r.abs_bias.to_f64() <= r.bound.unwrap());
        }
    }

    #[test]
    fn default_schedule_removes_bias() {
        let mut table = MomentTable::new(1);
        for (block, v) in [(vec![0], q(1, 2)), (vec![0, 0], q(7, 3))] {
            table.insert(&block, v).unwrap();
        }
        let schedule = StepSchedule::default_for(3, 2).unwrap();
        let report = exact_bias(&variance(), 3, 2, &table, &BiasMode::Schedule(schedule)).unwrap();
        assert_eq!(report.records[2].signed_bias, q(0, 1));
        assert!(report.records[2].bound.is_none());

        let mut csv = Vec::new();
        report.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("k,signed_bias,abs_bias,bound\n0,"));
        assert!(text.ends_with("2,0,0,\n"));
    }

    #[test]
    fn missing_moments_are_reported() {
        let table = MomentTable::new(1);
        assert!(exact_bias(&variance(), 3, 1, &table, &BiasMode::Stationary).is_err());
    }
}
