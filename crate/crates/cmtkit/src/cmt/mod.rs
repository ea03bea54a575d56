//! Tradeoff statistics, bound formulas, equality cases and the stress harness.

mod bounds;
mod extremal;
mod scenario;
mod stress;

pub use bounds::{
    fidelity_cmt_bound, general_cmt_bound, invert_cmt_bound, prior, qubit_td_bound,
    td_cmt_bound_best, td_cmt_bound_pair, td_cmt_bound_tight, tight_cmt_bound,
};
pub use extremal::{construct_fidelity_extremal, construct_tight_extremal, ExtremalWitness};
pub use scenario::{
    average_state_shift, purified_lower_estimate, tradeoff_stats, Scenario, States, TradeoffStats,
};
pub use stress::{
    generate_trial, standard_suites, stress_verify, trial_bound, StressConfig, TheoremId,
};
