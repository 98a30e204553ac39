use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::falling_factorial;
use crate::lattice::numbers::power;
use crate::scalar::Scalar;

/// Step sizes `η_1..η_k` for the scheduled bootstrap at sample size `N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepSchedule<T> {
    pub n: u64,
    pub etas: Vec<T>,
}

/// `η_i = N^i / falling(N, i)`, the reciprocal of the level-`i` diagonal of `S`.
pub fn default_eta<T: Scalar>(i: usize, n: u64) -> Result<T> {
    if i == 0 || i as u64 > n {
        return Err(Error::Infeasible(format!("step size η_{i} needs 1 <= i <= N = {n}")));
    }
    Ok(T::from_ratio(&power(n, i as u64), &falling_factorial(n, i as u64)))
}

impl<T: Scalar> StepSchedule<T> {
    /// `η_1..η_k` from [`default_eta`]; requires `k ≤ N`.
    pub fn default_for(n: u64, k: usize) -> Result<Self> {
        let etas = (1..=k).map(|i| default_eta(i, n)).collect::<Result<_>>()?;
        Ok(Self { n, etas })
    }

    /// Every step size 1: the stationary iterated bootstrap.
    pub fn unit(n: u64, k: usize) -> Self {
        Self { n, etas: vec![T::one(); k] }
    }

    pub fn custom(n: u64, etas: Vec<T>) -> Result<Self> {
        if etas.is_empty() {
            return Err(Error::InvalidInput("a schedule needs at least one step".into()));
        }
        Ok(Self { n, etas })
    }

    /// Comma or whitespace separated step sizes.
    pub fn parse(n: u64, text: &str) -> Result<Self> {
        let etas = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(T::parse_str)
            .collect::<Result<Vec<T>>>()?;
        Self::custom(n, etas)
    }

    pub fn len(&self) -> usize {
        self.etas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.etas.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.etas.iter().all(|e| e.is_one())
    }
}
