//! Elastic-net soft-thresholding prox and projection onto the elastic-net ball.

use ndarray::{Array1, ArrayView1};

use crate::error::{AgmError, Result};
use crate::scalar::Scalar;

/// `{w : γ‖w‖₁ + ½‖w‖₂² ≤ r}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticNetBall<T> {
    pub gamma: T,
    pub radius: T,
}

impl<T: Scalar> ElasticNetBall<T> {
    pub fn new(gamma: T, radius: T) -> Result<Self> {
        if !(gamma > T::zero() && gamma.is_finite()) {
            return Err(AgmError::Input("elastic-net ball needs gamma > 0".into()));
        }
        if !(radius > T::zero() && radius.is_finite()) {
            return Err(AgmError::Input("elastic-net ball needs r > 0".into()));
        }
        Ok(Self { gamma, radius })
    }

    /// `γ‖w‖₁ + ½‖w‖₂²`.
    pub fn constraint_value(&self, w: ArrayView1<T>) -> T {
        w.iter().map(|&x| self.gamma * x.abs() + T::lit(0.5) * x * x).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallProjection<T> {
    pub w: Array1<T>,
    /// Multiplier of the ball constraint, zero when inactive.
    pub multiplier: T,
}

/// `argmin_w λ(γ‖w‖₁ + ½‖w‖₂²) + (L/2)‖w − g‖₂²`.
pub fn elastic_net_prox<T: Scalar>(g: ArrayView1<T>, lambda: T, gamma: T, l: T) -> Result<Array1<T>> {
    if !(lambda >= T::zero()) || !(gamma >= T::zero()) || !(l > T::zero()) {
        return Err(AgmError::Input("elastic-net prox needs lambda, gamma >= 0 and L > 0".into()));
    }
    let thr = gamma * lambda;
    let denom = lambda + l;
    Ok(g.mapv(|gi| {
        let a = l * gi.abs() - thr;
        if a > T::zero() {
            gi.signum() * a / denom
        } else {
            T::zero()
        }
    }))
}

/// Euclidean projection of `g` onto the elastic-net ball.
///
/// The multiplier `λ*` is the root of the decreasing piecewise quadratic
/// `h(λ) = −2r(λ+1)² + Σ_{|gᵢ| ≥ γλ} [(γ+|gᵢ|)² − γ²(λ+1)²]`, found segment by segment
/// between the sorted kinks `|gᵢ|/γ`.
pub fn elastic_net_ball_project<T: Scalar>(
    g: ArrayView1<T>,
    ball: &ElasticNetBall<T>,
) -> Result<BallProjection<T>> {
    if g.iter().any(|v| !v.is_finite()) {
        return Err(AgmError::Input("point to project is not finite".into()));
    }
    let (gamma, r) = (ball.gamma, ball.radius);
    if ball.constraint_value(g) <= r {
        return Ok(BallProjection { w: g.to_owned(), multiplier: T::zero() });
    }
    let mut mags: Vec<T> = g.iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let two_r = T::lit(2.0) * r;
    let g2 = gamma * gamma;
    let mut q = T::zero();
    let mut lambda = T::zero();
    for k in 0..mags.len() {
        let a = mags[k];
        q += (gamma + a) * (gamma + a);
        let upper = a / gamma;
        let lower = mags.get(k + 1).map_or(T::zero(), |&b| b / gamma).max(T::zero());
        let kk = T::from_usize_lossy(k + 1);
        let t = (q / (two_r + kk * g2)).sqrt();
        let cand = t - T::one();
        if cand >= lower || k + 1 == mags.len() {
            lambda = cand.min(upper).max(T::zero());
            break;
        }
    }
    let w = g.mapv(|gi| {
        let a = gi.abs() - lambda * gamma;
        if a > T::zero() {
            gi.signum() * a / (T::one() + lambda)
        } else {
            T::zero()
        }
    });
    Ok(BallProjection { w, multiplier: lambda })
}
