//! The resampling operator on moment polynomials: the matrix `S` over Π(m),
//! its diagonal factorization through the zeta matrix, the level-sum matrix
//! `Š`, direct application to labeled polynomials, and the norm quantities
//! that govern convergence of the iterated bootstrap.

mod apply;
mod norms;
mod sampling;

pub use apply::{apply_s, coarsened_terms};
pub use norms::{
    gamma_exact, gamma_ratio, linear_regime_check, linear_regime_n, log_gamma_ratio, one_norm_closed_form,
    one_norm_closed_form_f64, one_norm_direct,
};
pub use sampling::{
    factorization, factorization_with, level_sums, reduced_matrix, sampling_matrix, Factorization, ReducedMatrix,
    SamplingMatrix,
};
