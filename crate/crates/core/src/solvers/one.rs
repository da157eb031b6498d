use ndarray::{Array1, ArrayView1};

use super::coeff::{interp_u_one, step_coeff_one};
use super::{
    accepted, check_start, ConvergenceTrace, CompositeProblem, DualOracle, DualTracker, LMode, SolveReport,
    SolveStatus, SolverConfig, StepInfo,
};
use crate::bregman::BregmanGeometry;
use crate::error::{AgmError, Result};
use crate::scalar::Scalar;

/// `q_k`: the full initial model for `k = 0`, then `c_k Δ(·, z_k) + q_k(z_k)`.
#[derive(Clone)]
enum Model<T> {
    Initial { u0: Array1<T>, f_u0: T, g_u0: Array1<T>, scale: T },
    Compressed,
}

/// State of the 1-memory method.
pub struct AgmOne<'a, T: Scalar, P: CompositeProblem<T> + ?Sized> {
    problem: &'a P,
    dual: Option<&'a dyn DualOracle<T>>,
    cfg: SolverConfig<T>,
    geom: BregmanGeometry,
    sigma: T,
    lambda1: T,
    lambda2: T,
    k: usize,
    c: T,
    x: Array1<T>,
    z: Array1<T>,
    j_x: T,
    q_z: T,
    model: Model<T>,
    l: T,
    l0: T,
    init_probes: usize,
    multiplier: Option<T>,
    tracker: Option<DualTracker<T>>,
    dual_value: Option<T>,
}

impl<'a, T: Scalar, P: CompositeProblem<T> + ?Sized> AgmOne<'a, T, P> {
    /// Builds `q₀` around `u₀` and sets `x₀ = z₀ = argmin q₀`.
    pub fn new(
        problem: &'a P,
        u0: ArrayView1<T>,
        cfg: SolverConfig<T>,
        dual: Option<&'a dyn DualOracle<T>>,
    ) -> Result<Self> {
        cfg.validate()?;
        check_start(problem, u0)?;
        let geom = problem.geometry();
        let sigma: T = geom.sigma();
        let (lambda1, lambda2) = (problem.lambda1(), problem.lambda2());
        let (f_u0, g_u0) = problem.smooth(u0)?;
        let grad_d_u0 = geom.gradient(u0)?;
        let tol = cfg.accept_tol();

        let (adaptive, mut l, gamma_u) = match cfg.l_mode {
            LMode::Fixed(l) => {
                if !(l > sigma * lambda1) {
                    return Err(AgmError::Config(format!(
                        "need L > sigma*lambda1, got L = {l}, sigma*lambda1 = {}",
                        sigma * lambda1
                    )));
                }
                (false, l, T::one())
            }
            LMode::Adaptive { initial, gamma_u, .. } => (true, initial / gamma_u, gamma_u),
        };
        let mut probes = 0;
        let (z, q_z, multiplier) = loop {
            probes += 1;
            if probes > cfg.max_probes {
                return Err(AgmError::LSearch { iteration: 0, probes: probes - 1 });
            }
            if adaptive {
                l *= gamma_u;
                if !(l > sigma * lambda1) {
                    continue;
                }
            }
            let scale = l / sigma;
            let theta = &grad_d_u0 - &(&g_u0 / scale);
            let prox = problem.prox(theta.view(), scale, T::one())?;
            let z = prox.x;
            let q = scale * geom.divergence_unchecked(z.view(), u0)
                + problem.regularizer(z.view())
                + f_u0
                + g_u0.dot(&(&z - &u0));
            if !adaptive || accepted(problem.objective(z.view())?, q, tol) {
                break (z, q, prox.multiplier);
            }
        };
        let j_x = problem.objective(z.view())?;
        let mut tracker = None;
        let mut dual_value = None;
        if let Some(d) = dual {
            let mut t = DualTracker::new(problem.domain_radius(u0));
            t.update_one(T::one(), d.dual_point(u0)?);
            dual_value = Some(d.dual_objective(t.alpha().unwrap())?);
            tracker = Some(t);
        }
        Ok(Self {
            problem,
            dual,
            cfg,
            geom,
            sigma,
            lambda1,
            lambda2,
            k: 0,
            c: l / sigma + lambda2,
            x: z.clone(),
            z,
            j_x,
            q_z,
            model: Model::Initial { u0: u0.to_owned(), f_u0, g_u0, scale: l / sigma },
            l,
            l0: l,
            init_probes: probes,
            multiplier,
            tracker,
            dual_value,
        })
    }

    /// `q_k(y)`.
    pub fn q_at(&self, y: ArrayView1<T>) -> T {
        match &self.model {
            Model::Initial { u0, f_u0, g_u0, scale } => {
                *scale * self.geom.divergence_unchecked(y, u0.view())
                    + self.problem.regularizer(y)
                    + *f_u0
                    + g_u0.dot(&(&y - u0))
            }
            Model::Compressed => self.c * self.geom.divergence_unchecked(y, self.z.view()) + self.q_z,
        }
    }

    pub fn step(&mut self) -> Result<StepInfo<T>> {
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
            if !adaptive || accepted(cand.j_x, cand.q_z, tol) {
                let a = cand.a;
                self.commit(cand, l)?;
                return Ok(StepInfo { a, l, probes });
            }
        }
    }

    fn candidate(&self, l: T) -> Result<Candidate<T>> {
        let (p, geom) = (self.problem, self.geom);
        let a = step_coeff_one(self.c, l, self.sigma, self.lambda1, self.lambda2)?;
        debug_assert!({
            let lhs = l * a * a;
            let rhs = self.sigma * (T::one() - a) * (self.c + self.lambda2 * a) + self.sigma * self.lambda1 * a;
            (lhs - rhs).abs() <= T::lit(1e-6) * lhs.abs().max(T::one())
        });
        let om = T::one() - a;
        let u = interp_u_one(self.x.view(), self.z.view(), self.c, a, self.lambda1, self.lambda2);
        let (fu, gu) = p.smooth(u.view())?;

        let (mut beta, mut g, tau) = match &self.model {
            Model::Initial { u0, g_u0, scale, .. } => {
                let mut g = geom.gradient_unchecked(u0.view()) * (om * *scale);
                g.scaled_add(-om, g_u0);
                (om * *scale, g, T::one())
            }
            Model::Compressed => {
                (om * self.c, geom.gradient_unchecked(self.z.view()) * (om * self.c), a)
            }
        };
        g.scaled_add(-a, &gu);
        if self.lambda1 > T::zero() {
            beta += a * self.lambda1;
            g.scaled_add(a * self.lambda1, &geom.gradient_unchecked(u.view()));
        }
        let theta = g / beta;
        let prox = p.prox(theta.view(), beta, tau)?;
        let z_new = prox.x;
        let mut lin = fu + gu.dot(&(&z_new - &u)) + p.regularizer(z_new.view());
        if self.lambda1 > T::zero() {
            lin += self.lambda1 * geom.divergence_unchecked(z_new.view(), u.view());
        }
        let q_new = om * self.q_at(z_new.view()) + a * lin;
        let x_new = &self.x * om + &z_new * a;
        let j_new = p.objective(x_new.view())?;
        Ok(Candidate { a, u, z: z_new, x: x_new, j_x: j_new, q_z: q_new, multiplier: prox.multiplier })
    }

    fn commit(&mut self, c: Candidate<T>, l: T) -> Result<()> {
        if let (Some(dual), Some(tracker)) = (self.dual, self.tracker.as_mut()) {
            tracker.update_one(c.a, dual.dual_point(c.u.view())?);
            self.dual_value = Some(dual.dual_objective(tracker.alpha().unwrap())?);
        }
        self.k += 1;
        self.c = (T::one() - c.a) * self.c + (self.lambda1 + self.lambda2) * c.a;
        self.x = c.x;
        self.z = c.z;
        self.j_x = c.j_x;
        self.q_z = c.q_z;
        self.model = Model::Compressed;
        self.multiplier = c.multiplier;
        self.l = l;
        Ok(())
    }

    pub fn iteration(&self) -> usize {
        self.k
    }

    /// `c_k`.
    pub fn c(&self) -> T {
        self.c
    }

    pub fn x(&self) -> ArrayView1<'_, T> {
        self.x.view()
    }

    pub fn z(&self) -> ArrayView1<'_, T> {
        self.z.view()
    }

    pub fn objective_at_x(&self) -> T {
        self.j_x
    }

    /// `q_k(z_k)`.
    pub fn q_at_z(&self) -> T {
        self.q_z
    }

    pub fn current_l(&self) -> T {
        self.l
    }

    /// `L` accepted when building `q₀`.
    pub fn initial_l(&self) -> T {
        self.l0
    }

    pub fn init_probes(&self) -> usize {
        self.init_probes
    }

    pub fn dual_value(&self) -> Option<T> {
        self.dual_value
    }

    pub fn dual_point(&self) -> Option<ArrayView1<'_, T>> {
        self.tracker.as_ref().and_then(|t| t.alpha())
    }

    /// `(L₀/σ)·b_k(0)·max Δ(x, u₀)`.
    pub fn certified_bound(&self) -> Option<T> {
        self.tracker.as_ref().and_then(|t| t.bound_one(self.l0, self.sigma))
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
    a: T,
    u: Array1<T>,
    z: Array1<T>,
    x: Array1<T>,
    j_x: T,
    q_z: T,
    multiplier: Option<T>,
}
