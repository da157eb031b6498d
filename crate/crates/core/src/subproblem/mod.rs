//! Exact solvers for the per-iteration inner problems.

mod elastic;
mod qp;
mod simplex;
mod text;

pub use elastic::{elastic_net_ball_project, elastic_net_prox, BallProjection, ElasticNetBall};
pub use qp::{solve_box_hyperplane, solve_box_hyperplane_with, BoxHyperplaneQp, KinkRule, QpSolution};
pub use simplex::{capped_simplex_entropy_prox, capped_simplex_gibbs, gibbs};
pub use text::{format_qp, parse_elastic_ball, parse_qp};
