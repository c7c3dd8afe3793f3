//! Exact dependence coefficients of finite-alphabet laws: total variation,
//! block mixing, switch coefficients, masked mixtures, the cyclic embedding
//! LP, and the coverage bounds built from them.

mod bounds;
mod lp;
mod mixing;
mod pmf;
mod rho;
mod switch;
mod verify;

pub use bounds::{coverage_bounds, BoundInputs, CoverageBounds};
pub use lp::{solve_lp, LpError, LpProblem, LpSolution, MAX_LP_VARIABLES};
pub use mixing::{beta_cond_mixing, beta_mixing};
pub use pmf::{masked_mixture, tv, AugmentedPmf};
pub use rho::{rho_lp, rho_lp_ordered, OrbitOrder};
pub use switch::{avg_switch, pooled_switch, switch_coeff, switch_positions, switch_profile};
pub use verify::{
    rotation_law, stationarity_gap, verify_inequalities, CoefficientSummary, InequalityCheck, InequalityReport,
    STATIONARITY_TOL,
};
