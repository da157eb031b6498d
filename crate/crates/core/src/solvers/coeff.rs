//! Step coefficients and interpolation points.

use ndarray::{Array1, ArrayView1};

use crate::error::{AgmError, Result};
use crate::scalar::Scalar;

fn check_common<T: Scalar>(l: T, sigma: T, lambda1: T, lambda2: T) -> Result<()> {
    if !(sigma > T::zero()) || !(l > T::zero()) || !l.is_finite() {
        return Err(AgmError::Config("need L > 0 and sigma > 0".into()));
    }
    if lambda1 < T::zero() || lambda2 < T::zero() {
        return Err(AgmError::Config("strong convexity moduli must be nonnegative".into()));
    }
    if !(l > sigma * lambda1) {
        return Err(AgmError::Config(format!(
            "need L > sigma*lambda1, got L = {l}, sigma*lambda1 = {}",
            sigma * lambda1
        )));
    }
    Ok(())
}

/// Positive root `a` of `(L/σ − λ₁)a² − (2λA + 1)a − A(λA + 1) = 0`, `λ = λ₁ + λ₂`.
pub fn step_coeff_inf<T: Scalar>(a_sum: T, l: T, sigma: T, lambda1: T, lambda2: T) -> Result<T> {
    check_common(l, sigma, lambda1, lambda2)?;
    if a_sum < T::zero() {
        return Err(AgmError::Config("A_k must be nonnegative".into()));
    }
    let lam = lambda1 + lambda2;
    let p = l / sigma - lambda1;
    let b = T::lit(2.0) * lam * a_sum + T::one();
    let c = a_sum * (lam * a_sum + T::one());
    Ok((b + (b * b + T::lit(4.0) * p * c).sqrt()) / (T::lit(2.0) * p))
}

/// Root `a ∈ (0, 1)` of `(L + σλ₂)a² + σ(c − λ₁ − λ₂)a − σc = 0`.
pub fn step_coeff_one<T: Scalar>(c: T, l: T, sigma: T, lambda1: T, lambda2: T) -> Result<T> {
    check_common(l, sigma, lambda1, lambda2)?;
    if !(c > T::zero()) {
        return Err(AgmError::Config("c_k must be positive".into()));
    }
    let p = l + sigma * lambda2;
    let b = sigma * (c - lambda1 - lambda2);
    let disc = (b * b + T::lit(4.0) * p * sigma * c).sqrt();
    let a = if b >= T::zero() {
        T::lit(2.0) * sigma * c / (b + disc)
    } else {
        (disc - b) / (T::lit(2.0) * p)
    };
    Ok(a.min(T::one()))
}

/// `(τ₁, τ₂, τ₃)` for the ∞-memory interpolation.
pub fn tau_inf<T: Scalar>(a_sum: T, a: T, lambda1: T, lambda2: T) -> (T, T, T) {
    let lam = lambda1 + lambda2;
    (T::one() + lam * a_sum, lambda1 * a, lambda2 * a * a_sum / (a_sum + a))
}

/// `u = [aτ₁z + (τA + τ₃a)x] / (τ(A + a) − τ₂a)`.
pub fn interp_u_inf<T: Scalar>(
    x: ArrayView1<T>,
    z: ArrayView1<T>,
    a_sum: T,
    a: T,
    lambda1: T,
    lambda2: T,
) -> Array1<T> {
    let (t1, t2, t3) = tau_inf(a_sum, a, lambda1, lambda2);
    let tau = t1 + t2 + t3;
    let den = tau * (a_sum + a) - t2 * a;
    let cz = a * t1 / den;
    let cx = (tau * a_sum + t3 * a) / den;
    &x * cx + &z * cz
}

/// `(τ₁, τ₂, τ₃)` for the 1-memory interpolation.
pub fn tau_one<T: Scalar>(c: T, a: T, lambda1: T, lambda2: T) -> (T, T, T) {
    let om = T::one() - a;
    (om * c, lambda1 * a, lambda2 * a * om)
}

/// `u = [(τ − (τ₁ + τ₂)a)x + τ₁a·z] / (τ − τ₂a)`.
pub fn interp_u_one<T: Scalar>(
    x: ArrayView1<T>,
    z: ArrayView1<T>,
    c: T,
    a: T,
    lambda1: T,
    lambda2: T,
) -> Array1<T> {
    let (t1, t2, t3) = tau_one(c, a, lambda1, lambda2);
    let tau = t1 + t2 + t3;
    let den = tau - t2 * a;
    let cx = (tau - (t1 + t2) * a) / den;
    let cz = t1 * a / den;
    &x * cx + &z * cz
}

/// Weights `b_k(i) = aᵢ ∏_{j>i}(1 − aⱼ)` of the 1-memory dual average, with `a₀ = 1`.
///
/// `a_seq` holds `a₁, …, a_k`; the result has `k + 1` entries summing to one.
pub fn one_memory_weights<T: Scalar>(a_seq: &[T]) -> Vec<T> {
    let k = a_seq.len();
    let mut b = vec![T::zero(); k + 1];
    let mut tail = T::one();
    for i in (0..=k).rev() {
        let ai = if i == 0 { T::one() } else { a_seq[i - 1] };
        b[i] = ai * tail;
        tail *= T::one() - ai;
    }
    b
}

/// Lower bound on `A_k` for fixed `L`.
pub fn growth_lower_bound_inf<T: Scalar>(k: usize, l: T, sigma: T, lambda1: T, lambda2: T) -> T {
    let lam = lambda1 + lambda2;
    let kk = T::from_usize_lossy(k);
    let poly = sigma * (kk + T::one()).powi(2) / (T::lit(4.0) * l);
    if k == 0 {
        return T::zero();
    }
    let q = T::one() + (sigma * lam / (T::lit(4.0) * l)).sqrt();
    let geo = sigma / (l - sigma * lambda1) * q.powi(2 * k as i32 - 2);
    poly.max(geo)
}

/// Bound on `J(x_k) − J(x)` for the ∞-memory method, in units of `Δ(x, x₀)`.
pub fn rate_factor_inf<T: Scalar>(k: usize, l: T, sigma: T, lambda1: T, lambda2: T) -> T {
    let lam = lambda1 + lambda2;
    let kk = T::from_usize_lossy(k);
    let poly = T::lit(4.0) * l / (sigma * (kk + T::one()).powi(2));
    let q = T::one() + (sigma * lam / (T::lit(4.0) * l)).sqrt();
    let geo = (l - sigma * lambda1) / sigma * q.powi(-(2 * k as i32) + 2);
    poly.min(geo)
}

/// Bound on `J(x_k) − J(x)` for the 1-memory method, in units of `Δ(x, u₀)`.
pub fn rate_factor_one<T: Scalar>(k: usize, l: T, sigma: T, lambda1: T, lambda2: T) -> T {
    let lam = lambda1 + lambda2;
    let kk = T::from_usize_lossy(k);
    let lp = l / sigma + lambda2;
    let geo = (T::one() - (lam / lp).sqrt()).powi(k as i32);
    let poly = T::lit(4.0) / (T::lit(2.0) + kk).powi(2);
    (l / sigma - lambda1) * geo.min(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use ndarray::array;

    #[test]
    fn inf_coefficients() {
        assert_relative_eq!(step_coeff_inf(0.0, 1.0, 1.0, 0.0, 0.0).unwrap(), 1.0);
        assert_relative_eq!(step_coeff_inf(3.0, 2.0, 1.0, 0.0, 0.0).unwrap(), 1.5);
        let a = step_coeff_inf(1.0, 4.0, 1.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(a, (3.0 + 41f64.sqrt()) / 8.0, max_relative = 1e-15);
    }

    #[test]
    fn inf_rejects_small_l() {
        assert!(matches!(step_coeff_inf(1.0, 1.0, 1.0, 1.0, 0.0), Err(AgmError::Config(_))));
    }

    #[test]
    fn one_coefficients() {
        let a = step_coeff_one(1.0, 1.0, 1.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(a, (5f64.sqrt() - 1.0) / 2.0, max_relative = 1e-15);
        let a = step_coeff_one(1.0, 1.0, 1.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(2.0 * a * a, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn interpolation_at_start_is_z() {
        let u = interp_u_inf(array![1.0, 2.0].view(), array![3.0, 4.0].view(), 0.0, 1.0, 0.0, 0.0);
        assert_eq!(u, array![3.0, 4.0]);
    }

    #[test]
    fn weights_example() {
        let b = one_memory_weights(&[0.5, 0.5]);
        assert_eq!(b, vec![0.25, 0.25, 0.5]);
    }
}
