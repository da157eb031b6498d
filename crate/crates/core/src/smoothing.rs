//! Smoothing of `g*` by a strongly convex `d₂`, iteration budgets, and
//! data-dependent prox weights.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::error::{AgmError, Result};
use crate::scalar::{log_sum_exp, Scalar};

/// Smoothed hinge `[1 − w]₊` with `d₂(α) = ½α²` on `α ∈ [0, 1]`. Returns `(value, derivative)`.
pub fn smoothed_hinge<T: Scalar>(w: T, mu: T) -> Result<(T, T)> {
    if !(mu > T::zero()) {
        return Err(AgmError::Config("smoothing parameter must be positive".into()));
    }
    let one = T::one();
    Ok(if w >= one {
        (T::zero(), T::zero())
    } else if w >= one - mu {
        let r = one - w;
        (r * r / (T::lit(2.0) * mu), -r / mu)
    } else {
        (one - w - mu / T::lit(2.0), -one)
    })
}

/// `μ ln Σ exp(sᵢ/μ)` and its gradient, the soft-max weights.
pub fn soft_max<T: Scalar>(s: ArrayView1<T>, mu: T) -> Result<(T, Array1<T>)> {
    if !(mu > T::zero()) {
        return Err(AgmError::Config("smoothing parameter must be positive".into()));
    }
    if s.is_empty() {
        return Err(AgmError::Input("soft-max of an empty vector".into()));
    }
    let scaled = s.mapv(|v| v / mu);
    let lse = log_sum_exp(scaled.iter().copied());
    let grad = scaled.mapv(|v| (v - lse).exp());
    Ok((mu * lse, grad))
}

/// `μ = ε/D`.
pub fn choose_mu<T: Scalar>(epsilon: T, d_range: T) -> Result<T> {
    if !(epsilon > T::zero()) || !(d_range > T::zero()) || !d_range.is_finite() {
        return Err(AgmError::Config("need epsilon > 0 and a finite positive prox range D".into()));
    }
    Ok(epsilon / d_range)
}

/// `‖A‖²/(μσ₂)`.
pub fn lipschitz_bound<T: Scalar>(a_norm: T, mu: T, sigma2: T) -> T {
    a_norm * a_norm / (mu * sigma2)
}

/// Constants of a smoothed problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingPlan<T> {
    pub epsilon: T,
    /// `max_{α ∈ Q₂} d₂(α)` with `min d₂ = 0`.
    pub d_range: T,
    pub mu: T,
    pub sigma2: T,
    pub a_norm: T,
    pub l_g_mu: T,
}

impl<T: Scalar> SmoothingPlan<T> {
    pub fn new(epsilon: T, d_range: T, a_norm: T, sigma2: T) -> Result<Self> {
        let mu = choose_mu(epsilon, d_range)?;
        Ok(Self { epsilon, d_range, mu, sigma2, a_norm, l_g_mu: lipschitz_bound(a_norm, mu, sigma2) })
    }
}

/// Which guarantee an iteration budget refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BudgetScheme<T> {
    /// ∞-memory on the smoothed primal; `div0 = Δ(w*, u₀)`, `lambda` the modulus of `Ω`.
    Primal { d_range: T, a_norm_sq: T, div0: T, sigma1: T, sigma2: T, lambda: T },
    /// ∞-memory on the smoothed dual; `m = max Δ(α, u₀)` over `Q₂`.
    Dual { d_range: T, a_norm_sq: T, m: T, lambda: T, l_g: T, sigma2: T },
    /// ∞-memory on the unsmoothed dual.
    Unsmoothed { a_norm_sq: T, m: T, lambda: T, l_g: T, sigma2: T },
}

/// Smallest `k` for which the chosen guarantee yields a `2ε` (smoothed) or `ε`
/// (unsmoothed) accurate primal solution. `+∞` when no branch is finite.
pub fn iteration_bound<T: Scalar>(scheme: BudgetScheme<T>, epsilon: T) -> T {
    let four = T::lit(4.0);
    let half = T::lit(0.5);
    let one = T::one();
    let nonneg = |v: T| if v.is_nan() { T::infinity() } else { v.max(T::zero()) };
    match scheme {
        BudgetScheme::Primal { d_range, a_norm_sq, div0, sigma1, sigma2, lambda } => {
            let c = four * d_range * a_norm_sq / (sigma1 * sigma2);
            let first = (c * div0).sqrt() / epsilon;
            let q = (one + (lambda * epsilon / c).sqrt()).ln();
            let second =
                if q > T::zero() { one + half * (c * div0 / (epsilon * epsilon)).ln() / q } else { T::infinity() };
            nonneg(first.min(second))
        }
        BudgetScheme::Dual { d_range, a_norm_sq, m, lambda, l_g, sigma2 } => {
            let c = four * m * (a_norm_sq + lambda * l_g) / (lambda * sigma2);
            let first = (c / epsilon).sqrt() - one;
            let q = (one + (lambda * epsilon * sigma2 / (four * d_range * (a_norm_sq + lambda * l_g))).sqrt()).ln();
            let second = if q > T::zero() { one + half * (c / epsilon).ln() / q } else { T::infinity() };
            nonneg(first.min(second))
        }
        BudgetScheme::Unsmoothed { a_norm_sq, m, lambda, l_g, sigma2 } => {
            let c = four * m * (a_norm_sq + lambda * l_g) / (lambda * sigma2);
            nonneg((c / epsilon).sqrt() - one)
        }
    }
}

/// `2R/√(λε) − 1`, the unsmoothed budget for the SVM with `M = 1/n`, `‖A‖² ≤ nR²`.
pub fn svm_unsmoothed_budget<T: Scalar>(radius: T, lambda: T, epsilon: T) -> T {
    T::lit(2.0) * radius / (lambda * epsilon).sqrt() - T::one()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerResult<T> {
    pub value: T,
    pub vector: Array1<T>,
    pub iterations: usize,
    /// `‖Mv − ρv‖₂` at exit.
    pub residual: T,
    /// Rayleigh quotient after each iteration.
    pub rayleigh: Vec<T>,
}

/// Power iteration for the dominant eigenpair of a symmetric PSD operator.
///
/// Starts from the normalized all-ones vector and stops once
/// `‖Mv − ρv‖₂ ≤ tol·scale` or after `max_iter` iterations.
pub fn power_iteration<T: Scalar, F>(dim: usize, matvec: F, max_iter: usize, tol: T, scale: T) -> Result<PowerResult<T>>
where
    F: Fn(ArrayView1<T>) -> Array1<T>,
{
    if dim == 0 {
        return Err(AgmError::Input("power iteration on an empty operator".into()));
    }
    let mut v = Array1::from_elem(dim, T::one() / T::from_usize_lossy(dim).sqrt());
    let mut mv = matvec(v.view());
    let mut rho = v.dot(&mv);
    let mut rayleigh = vec![rho];
    let mut residual = (&mv - &(&v * rho)).dot(&(&mv - &(&v * rho))).sqrt();
    let mut iterations = 0;
    while iterations < max_iter && residual > tol * scale {
        let nrm = mv.dot(&mv).sqrt();
        if !(nrm > T::zero()) {
            return Err(AgmError::Numerical("power iteration hit the null space".into()));
        }
        v = &mv / nrm;
        mv = matvec(v.view());
        rho = v.dot(&mv);
        rayleigh.push(rho);
        let r = &mv - &(&v * rho);
        residual = r.dot(&r).sqrt();
        iterations += 1;
    }
    Ok(PowerResult { value: rho, vector: v, iterations, residual, rayleigh })
}

/// Dense `Σ aᵢaᵢᵀ` of the rows of `rows`.
pub fn gram<T: Scalar>(rows: ArrayView2<T>) -> Array2<T> {
    rows.t().dot(&rows)
}

/// Weights `bᵢ²` of the prox function `½Σbᵢ²uᵢ²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxWeights<T> {
    pub b_sq: Array1<T>,
    pub v_star: Array1<T>,
    pub lmax: T,
    pub iterations: usize,
}

/// `bᵢ² = |aᵢᵀv*|` with `v*` the dominant eigenvector of `Σaᵢaᵢᵀ`; zeros are
/// floored at `1e−12·maxⱼ bⱼ²`.
pub fn optimize_prox_weights<T: Scalar>(rows: ArrayView2<T>, max_iter: usize) -> Result<ProxWeights<T>> {
    if rows.nrows() == 0 || rows.iter().all(|v| *v == T::zero()) {
        return Err(AgmError::Input("prox weights need at least one nonzero row".into()));
    }
    let m = gram(rows);
    let scale = m.iter().map(|v| *v * *v).sum::<T>().sqrt();
    let pr = power_iteration(m.nrows(), |v| m.dot(&v), max_iter, T::lit(1e-12), scale)?;
    let mut b_sq = rows.dot(&pr.vector).mapv(|v| v.abs());
    let floor = T::lit(1e-12) * b_sq.iter().copied().fold(T::zero(), T::max);
    b_sq.mapv_inplace(|v| v.max(floor));
    Ok(ProxWeights { b_sq, v_star: pr.vector, lmax: pr.value, iterations: pr.iterations })
}

/// `(Σbᵢ²)·λmax(Σbᵢ⁻²aᵢaᵢᵀ)`, the Lipschitz proxy for weights `b²`.
pub fn prox_weight_proxy<T: Scalar>(rows: ArrayView2<T>, b_sq: ArrayView1<T>, max_iter: usize) -> Result<T> {
    let mut scaled = rows.to_owned();
    for (mut r, &b) in scaled.rows_mut().into_iter().zip(b_sq.iter()) {
        r.mapv_inplace(|v| v / b.sqrt());
    }
    let m = gram(scaled.view());
    let scale = m.iter().map(|v| *v * *v).sum::<T>().sqrt();
    let pr = power_iteration(m.nrows(), |v| m.dot(&v), max_iter, T::lit(1e-12), scale)?;
    Ok(b_sq.sum() * pr.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use ndarray::array;

    #[test]
    fn hinge_branches() {
        assert_eq!(smoothed_hinge(1.5, 0.5).unwrap(), (0.0, 0.0));
        assert_eq!(smoothed_hinge(0.5, 1.0).unwrap(), (0.125, -0.5));
        assert_eq!(smoothed_hinge(-1.0, 0.5).unwrap(), (1.75, -1.0));
        let mu = 0.3;
        let (v, _) = smoothed_hinge(1.0 - mu, mu).unwrap();
        assert_abs_diff_eq!(v, mu / 2.0, epsilon = 1e-15);
        assert!(smoothed_hinge(0.0, 0.0).is_err());
    }

    #[test]
    fn soft_max_values() {
        let (v, g) = soft_max(array![0.0, 0.0].view(), 1.0).unwrap();
        assert_relative_eq!(v, 2f64.ln(), max_relative = 1e-15);
        assert_eq!(g, array![0.5, 0.5]);
        let (v, _) = soft_max(array![1.0, 3.0, -2.0].view(), 1e-8).unwrap();
        assert_abs_diff_eq!(v, 3.0, epsilon = 1e-6);
        let (a, _) = soft_max(array![1.0, 2.0].view(), 0.7).unwrap();
        let (b, _) = soft_max(array![6.0, 7.0].view(), 0.7).unwrap();
        assert_relative_eq!(b - a, 5.0, max_relative = 1e-13);
    }

    #[test]
    fn mu_and_lipschitz() {
        assert_relative_eq!(choose_mu(1e-2, 0.5).unwrap(), 0.02);
        assert_relative_eq!(choose_mu(1e-2, 1.0 / 100.0).unwrap(), 1.0, max_relative = 1e-14);
        assert!(choose_mu(0.0, 1.0).is_err());
        assert_eq!(lipschitz_bound(2.0, 1.0, 1.0), 4.0);
        assert_eq!(lipschitz_bound(10.0, 1.0, 1.0), 100.0);
        assert_eq!(lipschitz_bound(2.0, 2.0, 1.0), 2.0);
    }

    #[test]
    fn svm_budget() {
        assert_relative_eq!(svm_unsmoothed_budget(1.0, 1e-2, 1e-2), 199.0, max_relative = 1e-12);
        let n = 100.0;
        let k = iteration_bound(
            BudgetScheme::Unsmoothed { a_norm_sq: n, m: 1.0 / n, lambda: 1e-2, l_g: 0.0, sigma2: 1.0 },
            1e-2,
        );
        assert_relative_eq!(k, 199.0, max_relative = 1e-12);
    }

    #[test]
    fn primal_budget_without_strong_convexity() {
        let k = iteration_bound(
            BudgetScheme::Primal { d_range: 0.01, a_norm_sq: 100.0, div0: 1.0, sigma1: 1.0, sigma2: 1.0, lambda: 0.0 },
            1e-2,
        );
        assert_relative_eq!(k, 200.0, max_relative = 1e-12);
    }

    #[test]
    fn rank_one_weights() {
        let w = optimize_prox_weights(array![[1.0, 0.0]].view(), 100).unwrap();
        assert_abs_diff_eq!(f64::abs(w.v_star[0]), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.b_sq[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn repeated_rows() {
        let rows = array![[1.0, 0.0], [1.0, 0.0]];
        let w = optimize_prox_weights(rows.view(), 100).unwrap();
        assert_abs_diff_eq!(w.b_sq[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.b_sq[1], 1.0, epsilon = 1e-12);
        let opt = prox_weight_proxy(rows.view(), w.b_sq.view(), 100).unwrap();
        assert!(opt <= 2.0 * 2.0 + 1e-12);
    }

    #[test]
    fn zero_rows_rejected() {
        assert!(optimize_prox_weights(Array2::<f64>::zeros((3, 2)).view(), 10).is_err());
    }
}
