//! Resampling chains simulated by Monte Carlo or enumerated exhaustively.

mod chain;
mod coefficients;
mod estimate;
mod experiment;

pub use chain::{all_index_vectors, replica_rng, resample, ResampleChain};
pub use coefficients::{expansion_coefficients, EstimatorCoefficients};
pub use estimate::{
    exhaustive_estimate, exhaustive_resample_mean, mc_estimate, ChainStart, FnFunctional, Functional, McReport,
    EXHAUSTIVE_LIMIT,
};
pub use experiment::{
    bias_experiment, dataset_to_f64, sample_normal, BiasExperiment, BiasExperimentRow, Population,
};
