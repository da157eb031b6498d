use std::fs;
use std::path::{Path, PathBuf};

use agm_core::rrm::{
    build_elastic_net_ls, build_f1_svm, build_lpboost, build_svm_dual_smoothed, build_svm_dual_unsmoothed,
    build_svm_primal_smoothed, read_libsvm, solve, write_model, Dataset,
};
use agm_core::{CompositeProblem, DualOracle, LMode, SolveReport, SolveStatus, SolverConfig};
use anyhow::{Context, Result};
use log::info;
use ndarray::{Array1, Array2};

use crate::config::{LModeKind, ProblemKind, RunConfig, SchemeKind};

/// What a finished run produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: SolveStatus,
    pub iterations: usize,
    pub objective: f64,
    pub gap: Option<f64>,
    pub exit_code: u8,
}

fn solver_config(cfg: &RunConfig, lipschitz: Option<f64>) -> Result<SolverConfig<f64>> {
    let l_mode = match cfg.l_mode {
        LModeKind::Fixed => LMode::Fixed(
            cfg.l_init.or(lipschitz).context("fixed L needs --l-init for this problem")?,
        ),
        LModeKind::Adaptive => {
            LMode::Adaptive { initial: cfg.l_init.unwrap_or(1.0), gamma_d: cfg.gamma_d, gamma_u: cfg.gamma_u }
        }
    };
    Ok(SolverConfig { l_mode, gap_tol: cfg.gap_tol, zero_timing: cfg.no_timing, ..SolverConfig::adaptive(cfg.max_iter) })
}

fn run_problem<P: CompositeProblem<f64>>(
    p: &P,
    x0: Array1<f64>,
    cfg: &RunConfig,
    dual: Option<&dyn DualOracle<f64>>,
) -> Result<SolveReport<f64>> {
    let sc = solver_config(cfg, p.lipschitz())?;
    Ok(solve(p, x0.view(), &sc, dual, cfg.memory)?)
}

/// The model to write: `(weights, bias)`.
type Model = (Array1<f64>, f64);

fn dispatch(cfg: &RunConfig, data: &Dataset<f64>) -> Result<(SolveReport<f64>, Model)> {
    match cfg.problem {
        ProblemKind::Svm => match cfg.scheme {
            SchemeKind::PrimalSmooth => {
                let p = build_svm_primal_smoothed(data, cfg.lambda, cfg.epsilon)?;
                let r = run_problem(&p, Array1::zeros(data.p()), cfg, Some(&p))?;
                let b = p.bias(r.x.view())?;
                let w = r.x.clone();
                Ok((r, (w, b)))
            }
            SchemeKind::DualSmooth | SchemeKind::DualRaw => {
                let p = if cfg.scheme == SchemeKind::DualSmooth {
                    build_svm_dual_smoothed(data, cfg.lambda, cfg.epsilon)?
                } else {
                    build_svm_dual_unsmoothed(data, cfg.lambda)?
                };
                let r = run_problem(&p, Array1::zeros(data.n()), cfg, Some(&p))?;
                // the primal model is the running average carried by the dual tracker
                let w = r.dual.clone().unwrap_or_else(|| p.data.primal_of(r.x.view()));
                let (b, _) = p.data.best_bias(w.view());
                Ok((r, (w, b)))
            }
        },
        ProblemKind::Lpboost => {
            // weak hypotheses are the features: edge u_j = (y_i x_ij)_i
            let mut edges: Array2<f64> = data.x.t().to_owned();
            for (mut col, &y) in edges.columns_mut().into_iter().zip(data.y.iter()) {
                col.mapv_inplace(|v| v * y);
            }
            let p = build_lpboost(edges, cfg.lambda, cfg.nu, cfg.epsilon)?;
            let r = run_problem(&p, p.w0.clone(), cfg, None)?;
            let w = r.x.clone();
            Ok((r, (w, 0.0)))
        }
        ProblemKind::ElasticNet => {
            let p = build_elastic_net_ls(data, cfg.lambda, cfg.gamma)?;
            let r = run_problem(&p, Array1::zeros(data.p()), cfg, None)?;
            let w = r.x.clone();
            Ok((r, (w, 0.0)))
        }
        ProblemKind::F1svm => {
            let p = build_f1_svm(data, cfg.lambda, cfg.epsilon)?;
            let r = run_problem(&p, Array1::zeros(data.p()), cfg, None)?;
            let w = r.x.clone();
            Ok((r, (w, 0.0)))
        }
    }
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// `0` once the gap target is met (or, without one, on convergence), `2` otherwise.
fn exit_code(cfg: &RunConfig, r: &SolveReport<f64>) -> u8 {
    match (r.status, cfg.gap_tol) {
        (SolveStatus::GapReached, _) => 0,
        (SolveStatus::MaxIter, _) => 2,
        (_, Some(tol)) => {
            if r.gap.is_some_and(|g| g <= tol) {
                0
            } else {
                2
            }
        }
        (_, None) => 0,
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let data: Dataset<f64> = read_libsvm(&cfg.data, cfg.n_features)?;
    info!("{}: n = {}, p = {}", cfg.data.display(), data.n(), data.p());
    let (report, (w, b)) = dispatch(cfg, &data)?;

    if let Some(prefix) = &cfg.trace {
        let csv = with_extension(prefix, "csv");
        fs::write(&csv, report.trace.to_csv()).with_context(|| format!("writing {}", csv.display()))?;
        let jsonl = with_extension(prefix, "jsonl");
        fs::write(&jsonl, report.trace.to_json_lines()).with_context(|| format!("writing {}", jsonl.display()))?;
    }
    if let Some(out) = &cfg.out {
        let mut buf = Vec::new();
        write_model(w.view(), cfg.lambda, b, &mut buf)?;
        fs::write(out, buf).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(Outcome {
        status: report.status,
        iterations: report.iterations,
        objective: report.objective,
        gap: report.gap,
        exit_code: exit_code(cfg, &report),
    })
}
