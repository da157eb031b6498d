//! Accelerated gradient methods with estimate functions, Bregman prox geometry,
//! Nesterov smoothing and the regularized-risk problems built on them.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*F64` aliases
//! below fix the common case.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bregman;
pub mod error;
pub mod fscore;
pub mod rrm;
pub mod scalar;
pub mod smoothing;
pub mod solvers;
pub mod subproblem;

pub use bregman::{BregmanGeometry, EstimateModel, NormKind};
pub use error::{AgmError, Result};
pub use scalar::Scalar;
pub use solvers::{
    run_agm_inf, run_agm_one, AgmInf, AgmOne, CompositeProblem, ConvergenceTrace, DualOracle, LMode, Memory,
    ProxPoint, SolveReport, SolveStatus, SolverConfig, TraceRow,
};

pub type EstimateModelF64 = EstimateModel<f64>;
pub type SolverConfigF64 = SolverConfig<f64>;
pub type SolveReportF64 = SolveReport<f64>;
pub type BoxHyperplaneQpF64 = subproblem::BoxHyperplaneQp<f64>;
pub type QpSolutionF64 = subproblem::QpSolution<f64>;
pub type ElasticNetBallF64 = subproblem::ElasticNetBall<f64>;
pub type DatasetF64 = rrm::Dataset<f64>;
