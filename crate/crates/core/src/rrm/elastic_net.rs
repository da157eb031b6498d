//! Elastic-net least squares, `J(w) = (1/n)‖y − Xw‖² + λ(γ‖w‖₁ + ½‖w‖²)`.

use ndarray::{Array1, ArrayView1};

use super::data::Dataset;
use crate::bregman::BregmanGeometry;
use crate::error::{AgmError, Result};
use crate::scalar::Scalar;
use crate::smoothing::{gram, power_iteration};
use crate::solvers::{CompositeProblem, ProxPoint};

#[derive(Debug, Clone)]
pub struct ElasticNetLs<T> {
    pub data: Dataset<T>,
    pub lambda: T,
    pub gamma: T,
    /// `2λmax(XᵀX)/n`.
    pub l: T,
}

pub fn build_elastic_net_ls<T: Scalar>(data: &Dataset<T>, lambda: T, gamma: T) -> Result<ElasticNetLs<T>> {
    if !(lambda > T::zero()) || !(gamma >= T::zero()) {
        return Err(AgmError::Config("need lambda > 0 and gamma >= 0".into()));
    }
    let g = gram(data.x.view());
    let scale = g.iter().map(|v| *v * *v).sum::<T>().sqrt();
    let lmax = if scale > T::zero() {
        power_iteration(g.nrows(), |v| g.dot(&v), 10_000, T::lit(1e-10), scale)?.value
    } else {
        T::zero()
    };
    // a touch of slack so roundoff in λmax never undercuts the true constant
    let l = (T::lit(2.0) * lmax / T::from_usize_lossy(data.n()) * (T::one() + T::lit(1e-9))).max(T::min_positive_value());
    Ok(ElasticNetLs { data: data.clone(), lambda, gamma, l })
}

impl<T: Scalar> ElasticNetLs<T> {
    /// Largest violation of `0 ∈ ∇f(w) + λw + λγ∂‖w‖₁` over coordinates.
    pub fn optimality_violation(&self, w: ArrayView1<T>) -> Result<T> {
        let (_, g) = self.smooth(w)?;
        let lg = self.lambda * self.gamma;
        Ok(w.iter()
            .zip(g.iter())
            .map(|(&wi, &gi)| {
                let r = gi + self.lambda * wi;
                if wi > T::zero() {
                    (r + lg).abs()
                } else if wi < T::zero() {
                    (r - lg).abs()
                } else {
                    (r.abs() - lg).max(T::zero())
                }
            })
            .fold(T::zero(), T::max))
    }
}

impl<T: Scalar> CompositeProblem<T> for ElasticNetLs<T> {
    fn dim(&self) -> usize {
        self.data.p()
    }

    fn geometry(&self) -> BregmanGeometry {
        BregmanGeometry::Euclidean
    }

    fn smooth(&self, w: ArrayView1<T>) -> Result<(T, Array1<T>)> {
        let n = T::from_usize_lossy(self.data.n());
        let r = self.data.x.dot(&w) - &self.data.y;
        Ok((r.dot(&r) / n, self.data.x.t().dot(&r) * (T::lit(2.0) / n)))
    }

    fn regularizer(&self, w: ArrayView1<T>) -> T {
        self.lambda * (self.gamma * w.iter().map(|v| v.abs()).sum::<T>() + T::lit(0.5) * w.dot(&w))
    }

    fn prox(&self, theta: ArrayView1<T>, beta: T, tau: T) -> Result<ProxPoint<T>> {
        let thr = tau * self.lambda * self.gamma;
        let den = beta + tau * self.lambda;
        Ok(ProxPoint::plain(theta.mapv(|t| t.signum() * (beta * t.abs() - thr).max(T::zero()) / den)))
    }

    fn lambda2(&self) -> T {
        self.lambda
    }

    fn lipschitz(&self) -> Option<T> {
        Some(self.l)
    }
}
