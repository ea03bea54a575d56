//! Nonlocal games, coupled games and CHSH_q(p) value bounds.

mod chsh;
mod field;
mod spec;
mod strategy;
mod table;

pub use chsh::{
    chsh_excess, chsh_upper_asymptotic, chsh_upper_asymptotic_ln, chsh_upper_closed, chsh_upper_m,
    chsh_upper_m_ln, coupled_value_chsh, cubic_delta, cubic_excess, ChshParams,
};
pub use field::FiniteField;
pub use spec::GameSpec;
pub use strategy::{
    deterministic_strategy, evaluate_coupled, evaluate_strategy, induce_coupled,
    optimal_chsh22_strategy, CoupledStrategy, Measurements, Strategy,
};
pub use table::{chailloux_row, fillinger_row, prior_bounds_table, shi_sikora_row, SDP_REFERENCE};
