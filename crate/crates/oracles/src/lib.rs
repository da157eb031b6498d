//! Slow, independent reference implementations.
//!
//! Nothing here depends on `agm-core`; inputs and outputs are plain slices so the
//! two sides can only agree by computing the same mathematics.

mod f1;
mod linalg;
mod optim;
mod projection;
mod qp;

use std::time::Duration;

pub use f1::{brute_force_f1, brute_force_f1_gradient, F1Brute};
pub use linalg::{finite_difference_grad, ridge_solve, solve_linear, sym_eigen_max};
pub use optim::{
    fista, grid_minimize_capped_simplex, subgradient_minimize, svm_objective_exact, svm_subgradient_reference,
};
pub use projection::{capped_simplex_gibbs_bisect, elastic_ball_project_bisect, project_box, project_simplex};
pub use qp::kkt_enumerate_qp;

/// Result of a reference computation.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub value: f64,
    pub point: Vec<f64>,
    pub method: &'static str,
    pub tolerance: f64,
    pub seed: Option<u64>,
    pub wall_time: Duration,
}
