//! Entropy-regularized LPBoost, `J(w) = λΔ(w, w⁰) + maxᵢ ⟨uᵢ, w⟩` over the capped simplex.

use ndarray::{Array1, Array2, ArrayView1};

use crate::bregman::BregmanGeometry;
use crate::error::{AgmError, Result};
use crate::scalar::Scalar;
use crate::smoothing::{choose_mu, soft_max};
use crate::solvers::{CompositeProblem, ProxPoint};
use crate::subproblem::capped_simplex_gibbs;

#[derive(Debug, Clone)]
pub struct LpBoost<T> {
    /// Edge vectors `uᵢ` as rows (`t × n`).
    pub edges: Array2<T>,
    pub lambda: T,
    pub nu: T,
    pub mu: T,
    pub w0: Array1<T>,
}

pub fn build_lpboost<T: Scalar>(edges: Array2<T>, lambda: T, nu: T, epsilon: T) -> Result<LpBoost<T>> {
    let (t, n) = edges.dim();
    if t == 0 || n == 0 {
        return Err(AgmError::Input("need at least one edge vector and one example".into()));
    }
    if !(lambda > T::zero()) {
        return Err(AgmError::Config("lambda must be positive".into()));
    }
    if !(nu > T::zero() && nu <= T::one()) {
        return Err(AgmError::Config("nu must lie in (0, 1]".into()));
    }
    if nu * T::from_usize_lossy(n) < T::one() {
        return Err(AgmError::Infeasible(format!("nu·n = {} < 1", nu * T::from_usize_lossy(n))));
    }
    if edges.iter().any(|v| !v.is_finite()) {
        return Err(AgmError::Input("edges must be finite".into()));
    }
    // entropy on the t-simplex has range ln t; a single edge needs no smoothing
    let mu = if t == 1 { epsilon.max(T::min_positive_value()) } else { choose_mu(epsilon, T::from_usize_lossy(t).ln())? };
    let w0 = Array1::from_elem(n, T::one() / T::from_usize_lossy(n));
    Ok(LpBoost { edges, lambda, nu, mu, w0 })
}

impl<T: Scalar> LpBoost<T> {
    fn in_domain(&self, w: ArrayView1<T>) -> bool {
        let tol = T::lit(1e-9);
        w.iter().all(|&v| v >= T::zero() && v <= self.nu * (T::one() + tol)) && (w.sum() - T::one()).abs() <= tol
    }

    fn relative_entropy(&self, w: ArrayView1<T>) -> T {
        BregmanGeometry::Entropy.divergence_unchecked(w, self.w0.view())
    }

    /// Unsmoothed `J(w)`.
    pub fn exact_objective(&self, w: ArrayView1<T>) -> T {
        if !self.in_domain(w) {
            return T::infinity();
        }
        let top = self.edges.dot(&w).iter().copied().fold(T::neg_infinity(), T::max);
        self.lambda * self.relative_entropy(w) + top
    }
}

impl<T: Scalar> CompositeProblem<T> for LpBoost<T> {
    fn dim(&self) -> usize {
        self.edges.ncols()
    }

    fn geometry(&self) -> BregmanGeometry {
        BregmanGeometry::Entropy
    }

    /// Soft-max shifted by `−μ ln t` so that it never exceeds the max.
    fn smooth(&self, w: ArrayView1<T>) -> Result<(T, Array1<T>)> {
        let (v, p) = soft_max(self.edges.dot(&w).view(), self.mu)?;
        let shift = self.mu * T::from_usize_lossy(self.edges.nrows()).ln();
        Ok((v - shift, self.edges.t().dot(&p)))
    }

    fn regularizer(&self, w: ArrayView1<T>) -> T {
        if self.in_domain(w) {
            self.lambda * self.relative_entropy(w)
        } else {
            T::infinity()
        }
    }

    fn prox(&self, theta: ArrayView1<T>, beta: T, tau: T) -> Result<ProxPoint<T>> {
        let tl = tau * self.lambda;
        let center = BregmanGeometry::Entropy.gradient_unchecked(self.w0.view());
        let logits = (&theta * beta + &center * tl) / (beta + tl) - T::one();
        Ok(ProxPoint::plain(capped_simplex_gibbs(logits.view(), self.nu, T::one())?))
    }

    fn lambda2(&self) -> T {
        self.lambda
    }

    fn lipschitz(&self) -> Option<T> {
        let m = self.edges.iter().fold(T::zero(), |a, v| a.max(v.abs()));
        Some(m * m / self.mu)
    }

    fn domain_radius(&self, u0: ArrayView1<T>) -> Option<T> {
        // KL to u₀ is largest at a vertex of the capped simplex; bound by the uncapped vertex
        let min_u = u0.iter().copied().fold(T::infinity(), T::min);
        (min_u > T::zero()).then(|| -min_u.ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{run_agm_inf, SolverConfig};
    use approx::assert_relative_eq;
    use ndarray::array;

    #[test]
    fn single_edge_is_gibbs() {
        // J = λ KL(w, uniform) + ⟨u, w⟩ is minimized by w ∝ exp(−u/λ)
        let u = array![[0.5, -1.0, 2.0]];
        let p = build_lpboost(u.clone(), 0.7, 1.0, 1e-3).unwrap();
        let r = run_agm_inf(&p, p.w0.view(), &SolverConfig::adaptive(2000), None).unwrap();
        let ex = u.row(0).mapv(|v: f64| (-v / 0.7).exp());
        let ex = &ex / ex.sum();
        for i in 0..3 {
            assert_relative_eq!(r.x[i], ex[i], max_relative = 1e-6);
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(build_lpboost(array![[1.0, 2.0]], 1.0, 0.4, 0.1).is_err());
        assert!(build_lpboost(array![[1.0, 2.0]], 0.0, 1.0, 0.1).is_err());
        assert!(build_lpboost(Array2::<f64>::zeros((0, 2)), 1.0, 1.0, 0.1).is_err());
    }
}
