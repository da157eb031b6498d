//! Accelerated gradient methods with estimate functions.
//!
//! [`AgmInf`] keeps every linearization in its model (∞-memory) while
//! [`AgmOne`] folds the model into a single divergence after each step (1-memory).
//! Both support a fixed Lipschitz constant or an adaptive search for it.

mod coeff;
mod dual;
mod inf;
mod one;
mod problem;
mod trace;

use std::time::Instant;

pub use coeff::{
    growth_lower_bound_inf, interp_u_inf, interp_u_one, one_memory_weights, rate_factor_inf, rate_factor_one,
    step_coeff_inf, step_coeff_one, tau_inf, tau_one,
};
pub use dual::DualTracker;
pub use inf::AgmInf;
pub use one::AgmOne;
pub use problem::{CompositeProblem, DualOracle, ProxPoint};
pub use trace::{ConvergenceTrace, TraceRow, TRACE_COLUMNS};

use ndarray::{Array1, ArrayView1};

use crate::error::{AgmError, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LMode<T> {
    Fixed(T),
    /// Start from `initial`, divide by `γ_d·γ_u` at the start of each iteration and
    /// multiply by `γ_u` until the model inequality holds.
    Adaptive { initial: T, gamma_d: T, gamma_u: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Memory {
    Infinite,
    One,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<T> {
    pub l_mode: LMode<T>,
    pub max_iter: usize,
    /// Stop once the measured duality gap drops below this.
    pub gap_tol: Option<T>,
    /// Without a gap, stop when `J` moved less than `stall_tol·max(1, |J|)` over `stall_window` iterations.
    pub stall_tol: T,
    pub stall_window: usize,
    pub max_probes: usize,
    /// Solve in one prox step when `L = σλ₁` exactly.
    pub allow_one_step: bool,
    pub record_trace: bool,
    /// Record zero elapsed times so traces are reproducible bit for bit.
    pub zero_timing: bool,
}

impl<T: Scalar> SolverConfig<T> {
    pub fn fixed(l: T, max_iter: usize) -> Self {
        Self { l_mode: LMode::Fixed(l), ..Self::adaptive(max_iter) }
    }

    pub fn adaptive(max_iter: usize) -> Self {
        Self {
            l_mode: LMode::Adaptive { initial: T::one(), gamma_d: T::lit(2.0), gamma_u: T::lit(2.0) },
            max_iter,
            gap_tol: None,
            stall_tol: T::epsilon() * T::lit(8.0),
            stall_window: 10,
            max_probes: 60,
            allow_one_step: false,
            record_trace: true,
            zero_timing: false,
        }
    }

    pub fn with_gap_tol(mut self, tol: T) -> Self {
        self.gap_tol = Some(tol);
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self.l_mode {
            LMode::Fixed(l) if !(l > T::zero() && l.is_finite()) => {
                Err(AgmError::Config("fixed L must be positive and finite".into()))
            }
            LMode::Adaptive { initial, gamma_d, gamma_u }
                if !(initial > T::zero() && gamma_d >= T::one() && gamma_u > T::one()) =>
            {
                Err(AgmError::Config("adaptive L needs l_init > 0, gamma_d >= 1, gamma_u > 1".into()))
            }
            _ if self.max_probes == 0 => Err(AgmError::Config("max_probes must be positive".into())),
            _ => Ok(()),
        }
    }

    /// Relative slack accepted in the adaptive model test.
    pub(crate) fn accept_tol(&self) -> T {
        T::epsilon() * T::lit(1000.0)
    }

    /// Adaptive probes never go below this.
    pub(crate) fn l_floor(&self) -> T {
        T::epsilon().powi(4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Duality gap reached `gap_tol`.
    GapReached,
    /// Objective stopped moving (no gap available).
    Stalled,
    MaxIter,
    /// Degenerate `L = σλ₁` solved in one step.
    OneStep,
    /// `A_k` left the floating-point range; the model is exact to working precision.
    Saturated,
    /// Every adaptive probe failed after the first iteration, so the model test is
    /// dominated by roundoff.
    PrecisionLimit,
}

#[derive(Debug, Clone)]
pub struct SolveReport<T> {
    pub x: Array1<T>,
    pub objective: T,
    pub iterations: usize,
    pub status: SolveStatus,
    pub trace: ConvergenceTrace,
    /// Final dual average, when a dual oracle was attached.
    pub dual: Option<Array1<T>>,
    pub gap: Option<T>,
    /// Multiplier reported by the last prox call (e.g. an SVM bias).
    pub multiplier: Option<T>,
    pub final_l: T,
}

/// Summary of one outer iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo<T> {
    pub a: T,
    pub l: T,
    pub probes: usize,
}

pub(crate) fn check_start<T: Scalar, P: CompositeProblem<T> + ?Sized>(
    problem: &P,
    x0: ArrayView1<T>,
) -> Result<()> {
    if x0.len() != problem.dim() {
        return Err(AgmError::Input(format!("x0 has length {}, expected {}", x0.len(), problem.dim())));
    }
    problem.geometry().value(x0)?;
    if !problem.regularizer(x0).is_finite() {
        return Err(AgmError::Domain("x0 is outside dom Ψ".into()));
    }
    Ok(())
}

pub(crate) fn accepted<T: Scalar>(lhs: T, rhs: T, tol: T) -> bool {
    lhs <= rhs + tol * (lhs.abs() + rhs.abs()).max(T::min_positive_value())
}

/// Drives a method to completion and records the trace.
pub(crate) struct Driver<'a, T> {
    cfg: &'a SolverConfig<T>,
    start: Instant,
    trace: ConvergenceTrace,
    history: Vec<T>,
}

impl<'a, T: Scalar> Driver<'a, T> {
    pub(crate) fn new(cfg: &'a SolverConfig<T>) -> Self {
        Self { cfg, start: Instant::now(), trace: ConvergenceTrace::default(), history: Vec::new() }
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn record(
        &mut self,
        k: usize,
        objective: T,
        dual: Option<T>,
        bound: Option<T>,
        a_or_c: T,
        l: T,
        probes: usize,
    ) -> Option<SolveStatus> {
        let gap = dual.map(|d| objective - d);
        if self.cfg.record_trace {
            let elapsed_ms =
                if self.cfg.zero_timing { 0.0 } else { self.start.elapsed().as_secs_f64() * 1e3 };
            self.trace.push(TraceRow {
                k,
                objective: objective.to_f64().unwrap_or(f64::NAN),
                dual: dual.and_then(|d| d.to_f64()),
                gap: gap.and_then(|g| g.to_f64()),
                certified_bound: bound.and_then(|b| b.to_f64()),
                a_or_c: a_or_c.to_f64().unwrap_or(f64::NAN),
                l_k: l.to_f64().unwrap_or(f64::NAN),
                probes,
                elapsed_ms,
            });
        }
        self.history.push(objective);
        if let (Some(g), Some(tol)) = (gap, self.cfg.gap_tol) {
            if g <= tol {
                return Some(SolveStatus::GapReached);
            }
        }
        let w = self.cfg.stall_window;
        if dual.is_none() && w > 0 && self.history.len() > w {
            let now = objective;
            let then = self.history[self.history.len() - 1 - w];
            if (then - now).abs() <= self.cfg.stall_tol * T::one().max(now.abs()) {
                return Some(SolveStatus::Stalled);
            }
        }
        None
    }

    pub(crate) fn finish(self) -> ConvergenceTrace {
        self.trace
    }
}

/// Runs the ∞-memory method.
pub fn run_agm_inf<T: Scalar, P: CompositeProblem<T> + ?Sized>(
    problem: &P,
    x0: ArrayView1<T>,
    cfg: &SolverConfig<T>,
    dual: Option<&dyn DualOracle<T>>,
) -> Result<SolveReport<T>> {
    if let Some(report) = one_step_if_degenerate(problem, x0, cfg)? {
        return Ok(report);
    }
    let mut solver = AgmInf::new(problem, x0, cfg.clone(), dual)?;
    let mut driver = Driver::new(cfg);
    let mut status = SolveStatus::MaxIter;
    let obj0 = solver.objective_at_x();
    driver.record(0, obj0, None, None, T::zero(), solver.current_l(), 0);
    for _ in 0..cfg.max_iter {
        if solver.saturated() {
            status = SolveStatus::Saturated;
            break;
        }
        let info = match solver.step() {
            Err(AgmError::LSearch { iteration, .. }) if iteration > 1 => {
                status = SolveStatus::PrecisionLimit;
                break;
            }
            r => r?,
        };
        let d = solver.dual_value();
        if let Some(s) = driver.record(
            solver.iteration(),
            solver.objective_at_x(),
            d,
            solver.certified_bound(),
            solver.a_sum(),
            info.l,
            info.probes,
        ) {
            status = s;
            break;
        }
    }
    Ok(solver.into_report(status, driver.finish()))
}

/// Runs the 1-memory method.
pub fn run_agm_one<T: Scalar, P: CompositeProblem<T> + ?Sized>(
    problem: &P,
    u0: ArrayView1<T>,
    cfg: &SolverConfig<T>,
    dual: Option<&dyn DualOracle<T>>,
) -> Result<SolveReport<T>> {
    if let Some(report) = one_step_if_degenerate(problem, u0, cfg)? {
        return Ok(report);
    }
    let mut solver = AgmOne::new(problem, u0, cfg.clone(), dual)?;
    let mut driver = Driver::new(cfg);
    let mut status = SolveStatus::MaxIter;
    driver.record(
        0,
        solver.objective_at_x(),
        solver.dual_value(),
        solver.certified_bound(),
        solver.c(),
        solver.current_l(),
        solver.init_probes(),
    );
    for _ in 0..cfg.max_iter {
        let info = match solver.step() {
            Err(AgmError::LSearch { iteration, .. }) if iteration > 1 => {
                status = SolveStatus::PrecisionLimit;
                break;
            }
            r => r?,
        };
        if let Some(s) = driver.record(
            solver.iteration(),
            solver.objective_at_x(),
            solver.dual_value(),
            solver.certified_bound(),
            solver.c(),
            info.l,
            info.probes,
        ) {
            status = s;
            break;
        }
    }
    Ok(solver.into_report(status, driver.finish()))
}

/// With `L = σλ₁` the linearization plus `λ₁Δ(·, x₀)` is exact, so one prox solves the problem.
fn one_step_if_degenerate<T: Scalar, P: CompositeProblem<T> + ?Sized>(
    problem: &P,
    x0: ArrayView1<T>,
    cfg: &SolverConfig<T>,
) -> Result<Option<SolveReport<T>>> {
    cfg.validate()?;
    let LMode::Fixed(l) = cfg.l_mode else { return Ok(None) };
    let geom = problem.geometry();
    let sigma: T = geom.sigma();
    let lam1 = problem.lambda1();
    if l != sigma * lam1 || !cfg.allow_one_step {
        return Ok(None);
    }
    check_start(problem, x0)?;
    let (_, grad) = problem.smooth(x0)?;
    let theta = geom.gradient(x0)? - grad / lam1;
    let p = problem.prox(theta.view(), lam1, T::one())?;
    let objective = problem.objective(p.x.view())?;
    Ok(Some(SolveReport {
        x: p.x,
        objective,
        iterations: 1,
        status: SolveStatus::OneStep,
        trace: ConvergenceTrace::default(),
        dual: None,
        gap: None,
        multiplier: p.multiplier,
        final_l: l,
    }))
}
