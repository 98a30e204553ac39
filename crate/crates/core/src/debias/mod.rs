//! Exact iterated and scheduled bootstrap in coefficient space, exact bias
//! trajectories against known populations, and the bias bound calculators.

mod bounds;
mod iterate;
mod report;
mod schedule;

pub use bounds::{
    bandlimited_bound, bias_bound, bias_bound_as_displayed, general_bound, linear_cut, neumann_trace_bound,
    BoundResult, GeneralBound,
};
pub use iterate::{
    id_minus_s_power, nonstationary_debias, richardson_debias, richardson_neumann, schedule_bias_vector,
    stationary_bias_vector,
};
pub use report::{exact_bias, BiasMode, BiasRecord, BiasReport};
pub use schedule::{default_eta, StepSchedule};
