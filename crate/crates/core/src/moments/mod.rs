//! Moment polynomials over d-variate distributions, their evaluation on
//! datasets and moment tables, unbiased symmetric-statistic estimators, and
//! the moment ↔ cumulant relation on Π(m).

mod cumulants;
mod data;
mod estimators;
mod polynomial;
mod term;

pub use cumulants::{cumulants_from_moments, moments_from_cumulants, product_vector};
pub use data::{empirical_moment, Dataset, MomentSource, MomentTable, NormalPopulation};
pub use estimators::{symmetric_statistic, unbiased_evaluate};
pub use polynomial::MomentPolynomial;
pub use term::{Label, LabeledTerm};
