use serde::Serialize;

use crate::debias::StepSchedule;
use crate::scalar::Scalar;

/// Weights `a_0..a_k` of the estimator `Σ_j a_j F(X^{j+1})` along a
/// resampling chain; its expectation is `Σ_j a_j 𝒮^j F`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimatorCoefficients<T> {
    pub coeffs: Vec<T>,
}

impl<T: Scalar> EstimatorCoefficients<T> {
    pub fn plug_in() -> Self {
        Self { coeffs: vec![T::one()] }
    }

    /// `k`-times iterated bootstrap: `a_j = (−1)^j binom(k+1, j+1)`.
    pub fn stationary(k: usize) -> Self {
        Self::from_etas(&vec![T::one(); k])
    }

    pub fn from_schedule(schedule: &StepSchedule<T>) -> Self {
        Self::from_etas(&schedule.etas)
    }

    /// Expands `G_j = G_{j−1} + η_j (F − 𝒮 G_{j−1})`, `G_0 = F`, in powers of 𝒮.
    pub fn from_etas(etas: &[T]) -> Self {
        let mut a = vec![T::one()];
        for eta in etas {
            let mut next = Vec::with_capacity(a.len() + 1);
            next.push(a[0].clone() + eta.clone());
            for j in 1..a.len() {
                next.push(a[j].clone() - eta.clone() * a[j - 1].clone());
            }
            next.push(-(eta.clone() * a[a.len() - 1].clone()));
            a = next;
        }
        Self { coeffs: a }
    }

    /// Number of chain levels the estimator reads.
    pub fn depth(&self) -> usize {
        self.coeffs.len()
    }

    pub fn to_f64(&self) -> EstimatorCoefficients<f64> {
        EstimatorCoefficients { coeffs: self.coeffs.iter().map(Scalar::to_f64).collect() }
    }
}

/// Coefficients for a schedule, or for `k` stationary steps.
pub fn expansion_coefficients<T: Scalar>(schedule: &StepSchedule<T>) -> EstimatorCoefficients<T> {
    EstimatorCoefficients::from_schedule(schedule)
}
