use ndarray::{Array1, ArrayView1};

use super::coeff::{interp_u_inf, step_coeff_inf};
use super::{
    accepted, check_start, ConvergenceTrace, CompositeProblem, DualOracle, DualTracker, LMode, SolveReport,
    SolveStatus, SolverConfig, StepInfo,
};
use crate::bregman::BregmanGeometry;
use crate::error::{AgmError, Result};
use crate::scalar::Scalar;

/// State of the ∞-memory method.
///
/// The model is kept in lazy form
/// `ψ_k(x) = β_k d(x) − ⟨g_k, x⟩ + const + A_k Ψ(x)` with
/// `β_k = 1 + λ₁A_k` and `g_k = ∇d(x₀) + Σ aᵢ(λ₁∇d(uᵢ) − ∇f(uᵢ))`, and evaluated
/// relative to its minimizer `z_k` to avoid cancellation in the constant.
pub struct AgmInf<'a, T: Scalar, P: CompositeProblem<T> + ?Sized> {
    problem: &'a P,
    dual: Option<&'a dyn DualOracle<T>>,
    cfg: SolverConfig<T>,
    geom: BregmanGeometry,
    sigma: T,
    lambda1: T,
    lambda2: T,
    k: usize,
    a_sum: T,
    x: Array1<T>,
    z: Array1<T>,
    j_x: T,
    psi_z: T,
    beta: T,
    g: Array1<T>,
    d_z: T,
    reg_z: T,
    l: T,
    multiplier: Option<T>,
    tracker: Option<DualTracker<T>>,
    dual_value: Option<T>,
}

impl<'a, T: Scalar, P: CompositeProblem<T> + ?Sized> AgmInf<'a, T, P> {
    pub fn new(
        problem: &'a P,
        x0: ArrayView1<T>,
        cfg: SolverConfig<T>,
        dual: Option<&'a dyn DualOracle<T>>,
    ) -> Result<Self> {
        cfg.validate()?;
        check_start(problem, x0)?;
        let geom = problem.geometry();
        let sigma: T = geom.sigma();
        let (lambda1, lambda2) = (problem.lambda1(), problem.lambda2());
        let l = match cfg.l_mode {
            LMode::Fixed(l) => {
                if !(l > sigma * lambda1) {
                    return Err(AgmError::Config(format!(
                        "need L > sigma*lambda1, got L = {l}, sigma*lambda1 = {}",
                        sigma * lambda1
                    )));
                }
                l
            }
            LMode::Adaptive { initial, gamma_d, gamma_u } => initial * gamma_d * gamma_u,
        };
        let x = x0.to_owned();
        let j_x = problem.objective(x.view())?;
        let tracker = dual.map(|_| DualTracker::new(problem.domain_radius(x0)));
        Ok(Self {
            problem,
            dual,
            geom,
            sigma,
            lambda1,
            lambda2,
            k: 0,
            a_sum: T::zero(),
            z: x.clone(),
            g: geom.gradient(x0)?,
            d_z: geom.value(x0)?,
            reg_z: problem.regularizer(x0),
            x,
            j_x,
            psi_z: T::zero(),
            beta: T::one(),
            l,
            multiplier: None,
            tracker,
            dual_value: None,
            cfg,
        })
    }

    /// `ψ_k(y)`.
    pub fn psi_at(&self, y: ArrayView1<T>) -> T {
        let mut v = self.psi_z + self.beta * (self.geom.value_unchecked(y) - self.d_z) - self.g.dot(&y)
            + self.g.dot(&self.z);
        if self.a_sum > T::zero() {
            v += self.a_sum * (self.problem.regularizer(y) - self.reg_z);
        }
        v
    }

    /// True once `A_k` is too large for further steps to stay finite.
    pub fn saturated(&self) -> bool {
        self.a_sum >= T::max_value().powf(T::lit(0.25))
    }

    /// Performs one outer iteration, searching for `L` in adaptive mode.
    pub fn step(&mut self) -> Result<StepInfo<T>> {
        if self.saturated() {
            return Err(AgmError::Numerical(format!("A_k = {} is saturated", self.a_sum)));
        }
        let (adaptive, mut probe, gamma_u) = match self.cfg.l_mode {
            LMode::Fixed(l) => (false, l, T::one()),
            LMode::Adaptive { gamma_d, gamma_u, .. } => {
                (true, (self.l / (gamma_d * gamma_u)).max(self.cfg.l_floor() / gamma_u), gamma_u)
            }
        };
        let tol = self.cfg.accept_tol();
        let mut probes = 0;
        loop {
            probes += 1;
            if probes > self.cfg.max_probes {
                return Err(AgmError::LSearch { iteration: self.k + 1, probes: probes - 1 });
            }
            let l = if adaptive { probe * gamma_u } else { probe };
            probe = l;
            if adaptive && !(l > self.sigma * self.lambda1) {
                continue;
            }
            let cand = self.candidate(l)?;
            if !adaptive || accepted(cand.a_new * cand.j_x, cand.psi_z, tol) {
                let a = cand.a_new - self.a_sum;
                self.commit(cand, l)?;
                return Ok(StepInfo { a, l, probes });
            }
        }
    }

    fn candidate(&self, l: T) -> Result<Candidate<T>> {
        let (p, geom) = (self.problem, self.geom);
        let a = step_coeff_inf(self.a_sum, l, self.sigma, self.lambda1, self.lambda2)?;
        debug_assert!({
            let lam = self.lambda1 + self.lambda2;
            let lhs = l / self.sigma * a * a;
            let rhs = (a + self.a_sum) * (self.lambda1 * a + lam * self.a_sum + T::one())
                + a * self.lambda2 * self.a_sum;
            (lhs - rhs).abs() <= T::lit(1e-6) * lhs.abs().max(T::one())
        });
        let u = interp_u_inf(self.x.view(), self.z.view(), self.a_sum, a, self.lambda1, self.lambda2);
        let (fu, gu) = p.smooth(u.view())?;
        let a_new = self.a_sum + a;
        let beta_new = self.beta + a * self.lambda1;
        let mut g_new = &self.g - &(&gu * a);
        if self.lambda1 > T::zero() {
            g_new.scaled_add(a * self.lambda1, &geom.gradient_unchecked(u.view()));
        }
        let theta = &g_new / beta_new;
        let prox = p.prox(theta.view(), beta_new, a_new)?;
        let z_new = prox.x;
        let reg_new = p.regularizer(z_new.view());
        let d_new = geom.value_unchecked(z_new.view());
        let mut model = fu + gu.dot(&(&z_new - &u)) + reg_new;
        if self.lambda1 > T::zero() {
            model += self.lambda1 * geom.divergence_unchecked(z_new.view(), u.view());
        }
        let psi_new = self.psi_at(z_new.view()) + a * model;
        let x_new = (&self.x * self.a_sum + &z_new * a) / a_new;
        let j_new = p.objective(x_new.view())?;
        Ok(Candidate {
            a_new,
            beta_new,
            g_new,
            z: z_new,
            x: x_new,
            u,
            j_x: j_new,
            psi_z: psi_new,
            d_z: d_new,
            reg_z: reg_new,
            multiplier: prox.multiplier,
        })
    }

    fn commit(&mut self, c: Candidate<T>, l: T) -> Result<()> {
        let a = c.a_new - self.a_sum;
        if let (Some(dual), Some(tracker)) = (self.dual, self.tracker.as_mut()) {
            tracker.update_inf(self.a_sum, a, dual.dual_point(c.u.view())?);
            self.dual_value = Some(dual.dual_objective(tracker.alpha().unwrap())?);
        }
        self.k += 1;
        self.a_sum = c.a_new;
        self.beta = c.beta_new;
        self.g = c.g_new;
        self.z = c.z;
        self.x = c.x;
        self.j_x = c.j_x;
        self.psi_z = c.psi_z;
        self.d_z = c.d_z;
        self.reg_z = c.reg_z;
        self.multiplier = c.multiplier;
        self.l = l;
        Ok(())
    }

    pub fn iteration(&self) -> usize {
        self.k
    }

    /// `A_k`.
    pub fn a_sum(&self) -> T {
        self.a_sum
    }

    pub fn x(&self) -> ArrayView1<'_, T> {
        self.x.view()
    }

    pub fn z(&self) -> ArrayView1<'_, T> {
        self.z.view()
    }

    /// `J(x_k)`.
    pub fn objective_at_x(&self) -> T {
        self.j_x
    }

    /// `ψ_k(z_k)`.
    pub fn psi_at_z(&self) -> T {
        self.psi_z
    }

    /// Last accepted `L`.
    pub fn current_l(&self) -> T {
        self.l
    }

    /// `D(α_k)` of the running dual average.
    pub fn dual_value(&self) -> Option<T> {
        self.dual_value
    }

    pub fn dual_point(&self) -> Option<ArrayView1<'_, T>> {
        self.tracker.as_ref().and_then(|t| t.alpha())
    }

    /// `max Δ(x, x₀) / A_k`.
    pub fn certified_bound(&self) -> Option<T> {
        if self.k == 0 {
            return None;
        }
        self.tracker.as_ref().and_then(|t| t.bound_inf(self.a_sum))
    }

    pub fn multiplier(&self) -> Option<T> {
        self.multiplier
    }

    pub(crate) fn into_report(self, status: SolveStatus, trace: ConvergenceTrace) -> SolveReport<T> {
        let gap = self.dual_value.map(|d| self.j_x - d);
        SolveReport {
            objective: self.j_x,
            iterations: self.k,
            status,
            trace,
            dual: self.tracker.and_then(|t| t.alpha().map(|a| a.to_owned())),
            gap,
            multiplier: self.multiplier,
            final_l: self.l,
            x: self.x,
        }
    }
}

struct Candidate<T> {
    a_new: T,
    beta_new: T,
    g_new: Array1<T>,
    z: Array1<T>,
    x: Array1<T>,
    u: Array1<T>,
    j_x: T,
    psi_z: T,
    d_z: T,
    reg_z: T,
    multiplier: Option<T>,
}
