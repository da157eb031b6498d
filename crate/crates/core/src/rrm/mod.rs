//! Regularized risk problems wired to the solvers.

mod data;
mod elastic_net;
mod f1svm;
mod lpboost;
mod operator;
mod svm;
mod synth;

pub use data::{parse_libsvm, parse_model, read_libsvm, write_libsvm, write_model, Dataset};
pub use elastic_net::{build_elastic_net_ls, ElasticNetLs};
pub use f1svm::{build_f1_svm, F1Svm};
pub use lpboost::{build_lpboost, LpBoost};
pub use operator::{estimate_operator_norm, row_norm_bound, DenseOperator, LinearOperator};
pub use svm::{
    build_svm_dual_smoothed, build_svm_dual_unsmoothed, build_svm_primal_smoothed, svm_mu, SvmData, SvmDual,
    SvmPrimal, SvmScheme,
};
pub use synth::{generate, SynthKind, SynthSpec};

use ndarray::ArrayView1;

use crate::error::Result;
use crate::scalar::Scalar;
use crate::solvers::{run_agm_inf, run_agm_one, CompositeProblem, DualOracle, Memory, SolveReport, SolverConfig};

/// Runs the chosen memory variant.
pub fn solve<T: Scalar, P: CompositeProblem<T> + ?Sized>(
    problem: &P,
    x0: ArrayView1<T>,
    cfg: &SolverConfig<T>,
    dual: Option<&dyn DualOracle<T>>,
    memory: Memory,
) -> Result<SolveReport<T>> {
    match memory {
        Memory::Infinite => run_agm_inf(problem, x0, cfg, dual),
        Memory::One => run_agm_one(problem, x0, cfg, dual),
    }
}
