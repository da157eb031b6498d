//! Linear SVM with bias, `J(w) = λ/2‖w‖² + min_b (1/n)Σ[1 − yᵢ(xᵢᵀw + b)]₊`.
//!
//! With `A = −YX` the loss is `g*(Aw) = max_{α ∈ Q₂} ⟨Aw, α⟩ + Σαᵢ` over
//! `Q₂ = {α ∈ [0, 1/n]ⁿ : Σyᵢαᵢ = 0}`; the bias lives in the hyperplane multiplier.

use ndarray::{Array1, Array2, ArrayView1};

use super::data::Dataset;
use super::operator::{estimate_operator_norm, row_norm_bound, DenseOperator};
use crate::bregman::BregmanGeometry;
use crate::error::{AgmError, Result};
use crate::scalar::Scalar;
use crate::smoothing::choose_mu;
use crate::solvers::{CompositeProblem, DualOracle, ProxPoint};
use crate::subproblem::{solve_box_hyperplane, BoxHyperplaneQp};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvmScheme {
    PrimalSmoothed,
    DualSmoothed,
    DualUnsmoothed,
}

/// Data shared by all three formulations.
#[derive(Debug, Clone)]
pub struct SvmData<T> {
    /// Rows `yᵢxᵢ`.
    pub yx: Array2<T>,
    pub y: Array1<T>,
    pub lambda: T,
    /// `min(‖X‖₂ estimate, √n·R)`.
    pub a_norm: T,
    pub radius: T,
}

impl<T: Scalar> SvmData<T> {
    pub fn new(data: &Dataset<T>, lambda: T) -> Result<Self> {
        if !(lambda > T::zero()) || !lambda.is_finite() {
            return Err(AgmError::Config("lambda must be positive".into()));
        }
        let (pos, neg) = data.class_counts()?;
        if pos == 0 || neg == 0 {
            return Err(AgmError::Input("SVM with bias needs both classes".into()));
        }
        let mut yx = data.x.clone();
        for (mut r, &y) in yx.rows_mut().into_iter().zip(data.y.iter()) {
            r.mapv_inplace(|v| v * y);
        }
        let radius = data.max_row_norm();
        let est = estimate_operator_norm(&DenseOperator { a: data.x.clone() }, 10_000)?;
        let a_norm = est.min(row_norm_bound(data.n(), radius));
        Ok(Self { yx, y: data.y.clone(), lambda, a_norm, radius })
    }

    pub fn n(&self) -> usize {
        self.yx.nrows()
    }

    pub fn p(&self) -> usize {
        self.yx.ncols()
    }

    fn inv_n(&self) -> T {
        T::one() / T::from_usize_lossy(self.n())
    }

    /// `w(α) = XᵀYα/λ`.
    pub fn primal_of(&self, alpha: ArrayView1<T>) -> Array1<T> {
        self.yx.t().dot(&alpha) / self.lambda
    }

    /// `(b*, min_b (1/n)Σ[1 − yᵢ(xᵢᵀw + b)]₊)`, exact.
    pub fn best_bias(&self, w: ArrayView1<T>) -> (T, T) {
        let ys = self.yx.dot(&w);
        // with tᵢ = yᵢ − sᵢ the loss is (tᵢ − b)₊ for positives and (b − tᵢ)₊ for negatives
        let mut t: Vec<(T, bool)> =
            ys.iter().zip(self.y.iter()).map(|(&m, &y)| (y - m * y, y > T::zero())).collect();
        t.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        let n_pos = t.iter().filter(|e| e.1).count() as isize;
        let (mut pos_le, mut neg_le) = (0isize, 0isize);
        let mut b = t[t.len() - 1].0;
        for k in 0..t.len() {
            if t[k].1 {
                pos_le += 1;
            } else {
                neg_le += 1;
            }
            if k + 1 < t.len() && t[k + 1].0 == t[k].0 {
                continue;
            }
            if neg_le - (n_pos - pos_le) >= 0 {
                b = t[k].0;
                break;
            }
        }
        let risk: T = t
            .iter()
            .map(|&(ti, pos)| if pos { (ti - b).max(T::zero()) } else { (b - ti).max(T::zero()) })
            .sum::<T>()
            * self.inv_n();
        (b, risk)
    }

    /// Exact `J(w)`.
    pub fn objective(&self, w: ArrayView1<T>) -> T {
        T::lit(0.5) * self.lambda * w.dot(&w) + self.best_bias(w).1
    }

    /// `max_{α ∈ Q₂} ⟨1 − YXw, α⟩ − μ/2‖α‖²`, its maximizer and `b = −λ*`.
    pub fn smoothed_risk(&self, w: ArrayView1<T>, mu: T) -> Result<(T, Array1<T>, T)> {
        let n = self.n();
        let c = self.yx.dot(&w).mapv(|m| T::one() - m);
        let qp = BoxHyperplaneQp {
            d: Array1::from_elem(n, mu.sqrt()),
            m: &c / mu,
            l: Array1::zeros(n),
            u: Array1::from_elem(n, self.inv_n()),
            sigma: self.y.clone(),
            z: T::zero(),
        };
        let sol = solve_box_hyperplane(&qp)?;
        let val = c.dot(&sol.alpha) - T::lit(0.5) * mu * sol.alpha.dot(&sol.alpha);
        Ok((val, sol.alpha, -sol.multiplier))
    }

    /// `J_μ(w)`; `μ = 0` gives the exact objective.
    pub fn smoothed_objective(&self, w: ArrayView1<T>, mu: T) -> Result<T> {
        if mu == T::zero() {
            return Ok(self.objective(w));
        }
        Ok(T::lit(0.5) * self.lambda * w.dot(&w) + self.smoothed_risk(w, mu)?.0)
    }

    /// `D_μ(α) = Σαᵢ − μ/2‖α‖² − ‖XᵀYα‖²/(2λ)`.
    pub fn dual_value(&self, alpha: ArrayView1<T>, mu: T) -> T {
        let v = self.yx.t().dot(&alpha);
        alpha.sum() - T::lit(0.5) * mu * alpha.dot(&alpha) - v.dot(&v) / (T::lit(2.0) * self.lambda)
    }

    fn feasible(&self, alpha: ArrayView1<T>) -> bool {
        let ub = self.inv_n();
        let tol = T::lit(1e-9) * ub;
        alpha.iter().all(|&a| a >= -tol && a <= ub + tol) && alpha.dot(&self.y).abs() <= T::lit(1e-9)
    }

    /// `max_{α ∈ [0,1/n]ⁿ} ½‖α − u₀‖²`, ignoring the hyperplane.
    pub fn box_radius(&self, u0: ArrayView1<T>) -> T {
        let ub = self.inv_n();
        T::lit(0.5) * u0.iter().map(|&u| (u * u).max((ub - u) * (ub - u))).sum::<T>()
    }
}

/// Smoothed primal: minimize `λ/2‖w‖² + g*_μ(−YXw)` over `w`.
#[derive(Debug, Clone)]
pub struct SvmPrimal<T> {
    pub data: SvmData<T>,
    pub mu: T,
}

impl<T: Scalar> SvmPrimal<T> {
    /// Bias `−λ*` of the smoothed loss at `w`.
    pub fn bias(&self, w: ArrayView1<T>) -> Result<T> {
        Ok(self.data.smoothed_risk(w, self.mu)?.2)
    }
}

impl<T: Scalar> CompositeProblem<T> for SvmPrimal<T> {
    fn dim(&self) -> usize {
        self.data.p()
    }

    fn geometry(&self) -> BregmanGeometry {
        BregmanGeometry::Euclidean
    }

    fn smooth(&self, w: ArrayView1<T>) -> Result<(T, Array1<T>)> {
        let (v, alpha, _) = self.data.smoothed_risk(w, self.mu)?;
        Ok((v, -self.data.yx.t().dot(&alpha)))
    }

    fn regularizer(&self, w: ArrayView1<T>) -> T {
        T::lit(0.5) * self.data.lambda * w.dot(&w)
    }

    fn prox(&self, theta: ArrayView1<T>, beta: T, tau: T) -> Result<ProxPoint<T>> {
        Ok(ProxPoint::plain(theta.mapv(|t| beta * t / (beta + tau * self.data.lambda))))
    }

    fn lambda2(&self) -> T {
        self.data.lambda
    }

    fn lipschitz(&self) -> Option<T> {
        Some(self.data.a_norm * self.data.a_norm / self.mu)
    }
}

impl<T: Scalar> DualOracle<T> for SvmPrimal<T> {
    fn dual_point(&self, w: ArrayView1<T>) -> Result<Array1<T>> {
        Ok(self.data.smoothed_risk(w, self.mu)?.1)
    }

    fn dual_objective(&self, alpha: ArrayView1<T>) -> Result<T> {
        Ok(self.data.dual_value(alpha, self.mu))
    }
}

/// Dual: minimize `−D_μ(α)` over `Q₂`; `μ = 0` is the unsmoothed dual.
#[derive(Debug, Clone)]
pub struct SvmDual<T> {
    pub data: SvmData<T>,
    pub mu: T,
}

impl<T: Scalar> SvmDual<T> {
    fn project(&self, m: Array1<T>) -> Result<(Array1<T>, T)> {
        let n = self.data.n();
        let qp = BoxHyperplaneQp {
            d: Array1::ones(n),
            m,
            l: Array1::zeros(n),
            u: Array1::from_elem(n, self.data.inv_n()),
            sigma: self.data.y.clone(),
            z: T::zero(),
        };
        let sol = solve_box_hyperplane(&qp)?;
        Ok((sol.alpha, sol.multiplier))
    }
}

impl<T: Scalar> CompositeProblem<T> for SvmDual<T> {
    fn dim(&self) -> usize {
        self.data.n()
    }

    fn geometry(&self) -> BregmanGeometry {
        BregmanGeometry::Euclidean
    }

    fn smooth(&self, alpha: ArrayView1<T>) -> Result<(T, Array1<T>)> {
        let v = self.data.yx.t().dot(&alpha);
        let lam = self.data.lambda;
        let f = v.dot(&v) / (T::lit(2.0) * lam) - alpha.sum();
        let g = self.data.yx.dot(&v).mapv(|m| m / lam - T::one());
        Ok((f, g))
    }

    fn regularizer(&self, alpha: ArrayView1<T>) -> T {
        if self.data.feasible(alpha) {
            T::lit(0.5) * self.mu * alpha.dot(&alpha)
        } else {
            T::infinity()
        }
    }

    fn prox(&self, theta: ArrayView1<T>, beta: T, tau: T) -> Result<ProxPoint<T>> {
        let scale = beta / (beta + tau * self.mu);
        let (x, mult) = self.project(theta.mapv(|t| t * scale))?;
        Ok(ProxPoint { x, multiplier: Some(mult) })
    }

    fn lambda2(&self) -> T {
        self.mu
    }

    fn lipschitz(&self) -> Option<T> {
        Some(self.data.a_norm * self.data.a_norm / self.data.lambda)
    }

    fn domain_radius(&self, u0: ArrayView1<T>) -> Option<T> {
        Some(self.data.box_radius(u0))
    }
}

impl<T: Scalar> DualOracle<T> for SvmDual<T> {
    fn dual_point(&self, alpha: ArrayView1<T>) -> Result<Array1<T>> {
        Ok(self.data.primal_of(alpha))
    }

    /// `−J_μ(w)`.
    fn dual_objective(&self, w: ArrayView1<T>) -> Result<T> {
        Ok(-self.data.smoothed_objective(w, self.mu)?)
    }
}

/// `μ = ε/D` with `D = 1/n` for `d₂ = ½‖α‖²` on `Q₂`.
pub fn svm_mu<T: Scalar>(n: usize, epsilon: T) -> Result<T> {
    choose_mu(epsilon, T::one() / T::from_usize_lossy(n))
}

pub fn build_svm_primal_smoothed<T: Scalar>(data: &Dataset<T>, lambda: T, epsilon: T) -> Result<SvmPrimal<T>> {
    let d = SvmData::new(data, lambda)?;
    let mu = svm_mu(d.n(), epsilon)?;
    Ok(SvmPrimal { data: d, mu })
}

pub fn build_svm_dual_smoothed<T: Scalar>(data: &Dataset<T>, lambda: T, epsilon: T) -> Result<SvmDual<T>> {
    let d = SvmData::new(data, lambda)?;
    let mu = svm_mu(d.n(), epsilon)?;
    Ok(SvmDual { data: d, mu })
}

pub fn build_svm_dual_unsmoothed<T: Scalar>(data: &Dataset<T>, lambda: T) -> Result<SvmDual<T>> {
    Ok(SvmDual { data: SvmData::new(data, lambda)?, mu: T::zero() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use ndarray::array;

    fn toy() -> Dataset<f64> {
        Dataset::new(array![[1.0, 0.0], [0.0, 1.0]], array![1.0, -1.0]).unwrap()
    }

    #[test]
    fn best_bias_brute_force() {
        let d = Dataset::new(
            array![[0.3, 0.1], [-0.2, 0.5], [0.9, -0.4], [0.1, 0.1], [-0.6, -0.3]],
            array![1.0, -1.0, 1.0, -1.0, 1.0],
        )
        .unwrap();
        let s = SvmData::new(&d, 0.1).unwrap();
        let w = array![1.2, -0.7];
        let (_, risk) = s.best_bias(w.view());
        let scores = d.x.dot(&w);
        let h = |b: f64| {
            scores.iter().zip(d.y.iter()).map(|(&si, &yi)| (1.0 - yi * (si + b)).max(0.0)).sum::<f64>() / 5.0
        };
        let brute = (-4000..=4000).map(|i| h(i as f64 * 1e-3)).fold(f64::INFINITY, f64::min);
        assert!(risk <= brute + 1e-12 && risk >= brute - 1e-3, "{risk} vs {brute}");
    }

    #[test]
    fn zero_weight_values() {
        let s = SvmData::new(&toy(), 1.0).unwrap();
        assert_relative_eq!(s.objective(array![0.0, 0.0].view()), 1.0);
        let mu = 0.5;
        // α = (1/2, 1/2) is optimal: each margin contributes 1·½ − μ/2·¼
        let (v, a, _) = s.smoothed_risk(array![0.0, 0.0].view(), mu).unwrap();
        assert_relative_eq!(v, 1.0 - mu / 4.0, max_relative = 1e-14);
        assert_relative_eq!(a[0], 0.5);
    }

    #[test]
    fn single_class_rejected() {
        let d = Dataset::new(array![[1.0], [2.0]], array![1.0, 1.0]).unwrap();
        assert!(SvmData::new(&d, 1.0).is_err());
        assert!(SvmData::new(&toy(), 0.0).is_err());
    }

    #[test]
    fn dual_gradient_matches_differences() {
        let s = build_svm_dual_smoothed(&toy(), 0.3, 0.1).unwrap();
        let a = array![0.2, 0.1];
        let (_, g) = s.smooth(a.view()).unwrap();
        for i in 0..2 {
            let mut e = Array1::zeros(2);
            e[i] = 1e-6;
            let fp = s.smooth((&a + &e).view()).unwrap().0;
            let fm = s.smooth((&a - &e).view()).unwrap().0;
            assert_relative_eq!(g[i], (fp - fm) / 2e-6, max_relative = 1e-6);
        }
    }
}
