use ndarray::{Array1, ArrayView1};

use crate::bregman::BregmanGeometry;
use crate::error::Result;
use crate::scalar::Scalar;

/// Output of a prox step.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxPoint<T> {
    pub x: Array1<T>,
    /// Multiplier of an equality constraint inside `Ψ`, when there is one.
    pub multiplier: Option<T>,
}

impl<T> ProxPoint<T> {
    pub fn plain(x: Array1<T>) -> Self {
        Self { x, multiplier: None }
    }
}

/// `J(x) = f(x) + Ψ(x)` with `f` smooth and `Ψ` prox-friendly.
///
/// `f` is `λ₁`-strongly convex and `Ψ` is `λ₂`-strongly convex, both with respect to
/// the geometry's prox function `d`.
pub trait CompositeProblem<T: Scalar> {
    fn dim(&self) -> usize;

    fn geometry(&self) -> BregmanGeometry;

    /// `(f(x), ∇f(x))`.
    fn smooth(&self, x: ArrayView1<T>) -> Result<(T, Array1<T>)>;

    fn smooth_value(&self, x: ArrayView1<T>) -> Result<T> {
        Ok(self.smooth(x)?.0)
    }

    /// `Ψ(x)`, `+∞` outside its domain.
    fn regularizer(&self, x: ArrayView1<T>) -> T;

    /// `argmin_x β·(d(x) − ⟨θ, x⟩) + τ·Ψ(x)` for `β > 0`, `τ ≥ 0`.
    fn prox(&self, theta: ArrayView1<T>, beta: T, tau: T) -> Result<ProxPoint<T>>;

    fn lambda1(&self) -> T {
        T::zero()
    }

    fn lambda2(&self) -> T {
        T::zero()
    }

    /// Lipschitz constant of `∇f` with respect to the geometry's norm, if known.
    fn lipschitz(&self) -> Option<T> {
        None
    }

    /// `max_{x ∈ dom Ψ} Δ(x, u₀)`, or `None` when unbounded.
    fn domain_radius(&self, _u0: ArrayView1<T>) -> Option<T> {
        None
    }

    fn objective(&self, x: ArrayView1<T>) -> Result<T> {
        Ok(self.smooth_value(x)? + self.regularizer(x))
    }
}

/// Saddle structure `f(x) = max_α φ(x, α)` used to certify duality gaps.
pub trait DualOracle<T: Scalar> {
    /// `α(u) = argmax_α φ(u, α)`.
    fn dual_point(&self, u: ArrayView1<T>) -> Result<Array1<T>>;

    /// `D(α) = min_x φ(x, α) + Ψ(x)`.
    fn dual_objective(&self, alpha: ArrayView1<T>) -> Result<T>;
}
