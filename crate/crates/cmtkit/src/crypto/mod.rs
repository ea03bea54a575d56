//! Security parameters for relativistic bit commitment and no-go bounds for
//! oblivious transfer, homomorphic encryption and private queries.

mod nogo;
mod rbc;

pub use nogo::{
    linspace, nogo_grid, nogo_point, qhe_nogo_rhs, qot_nogo_rhs, qot_prior_rhs, qpq_nogo,
    qpq_prior, NogoPoint, Primitive, QpqBound, QpqBranch,
};
pub use rbc::{
    rbc_eps_from_game, rbc_eps_sigma, rbc_parallel_eps, rbc_plan, rbc_sum_binding_eps, RbcPlan,
    MAX_L,
};
