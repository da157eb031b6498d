use ndarray::{Array1, ArrayView1};

use crate::scalar::Scalar;

/// Running dual average and its certified gap bound.
#[derive(Debug, Clone)]
pub struct DualTracker<T> {
    alpha: Option<Array1<T>>,
    /// `∏(1 − aⱼ)`, the weight left on `α(u₀)` by the 1-memory average.
    b0: T,
    radius: Option<T>,
}

impl<T: Scalar> DualTracker<T> {
    /// `radius` is `max_{x ∈ dom Ψ} Δ(x, u₀)`, `None` when the domain is unbounded.
    pub fn new(radius: Option<T>) -> Self {
        Self { alpha: None, b0: T::one(), radius: radius.filter(|r| r.is_finite()) }
    }

    pub fn alpha(&self) -> Option<ArrayView1<'_, T>> {
        self.alpha.as_ref().map(|a| a.view())
    }

    /// `α_{k+1} = (A_k α_k + a α(u)) / A_{k+1}`; the first call sets `α₁ = α(u₁)`.
    pub fn update_inf(&mut self, a_sum: T, a: T, alpha_u: Array1<T>) {
        self.alpha = Some(match self.alpha.take() {
            None => alpha_u,
            Some(prev) => {
                let w = a_sum / (a_sum + a);
                prev * w + alpha_u * (T::one() - w)
            }
        });
    }

    /// `α₀ = α(u₀)`, then `α_{k+1} = (1 − a)α_k + a α(u)`.
    pub fn update_one(&mut self, a: T, alpha_u: Array1<T>) {
        self.alpha = Some(match self.alpha.take() {
            None => alpha_u,
            Some(prev) => {
                self.b0 *= T::one() - a;
                prev * (T::one() - a) + alpha_u * a
            }
        });
    }

    /// `M / A_k`.
    pub fn bound_inf(&self, a_sum: T) -> Option<T> {
        self.radius.map(|m| m / a_sum)
    }

    /// `(L₀/σ)·b_k(0)·M`.
    pub fn bound_one(&self, l0: T, sigma: T) -> Option<T> {
        self.radius.map(|m| l0 / sigma * self.b0 * m)
    }

    pub fn b0(&self) -> T {
        self.b0
    }
}
