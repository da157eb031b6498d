//! F1 multivariate SVM, `J(w) = λ/2‖w‖² + max_{y′} [Δ(y′, y) + (1/n)Σ(y′ᵢ − yᵢ)xᵢᵀw]`,
//! smoothed with the entropy on the scaled `2ⁿ`-simplex.

use ndarray::{Array1, ArrayView1};

use super::data::Dataset;
use crate::bregman::BregmanGeometry;
use crate::error::{AgmError, Result};
use crate::fscore::{f1_max_loss, f1_smoothed_gradient};
use crate::scalar::Scalar;
use crate::smoothing::choose_mu;
use crate::solvers::{CompositeProblem, ProxPoint};

#[derive(Debug, Clone)]
pub struct F1Svm<T> {
    pub data: Dataset<T>,
    pub labels: Vec<i8>,
    pub lambda: T,
    pub mu: T,
    /// `4nR²/μ`.
    pub l: T,
}

/// `μ = ε/ln 2`: the centered entropy on `{α ≥ 0, Σα = 1/n}` over `2ⁿ` labelings has range `ln 2`.
pub fn build_f1_svm<T: Scalar>(data: &Dataset<T>, lambda: T, epsilon: T) -> Result<F1Svm<T>> {
    if !(lambda > T::zero()) {
        return Err(AgmError::Config("lambda must be positive".into()));
    }
    let labels = data.labels()?;
    if !labels.contains(&1) || !labels.contains(&-1) {
        return Err(AgmError::Input("F1 needs both classes".into()));
    }
    let mu = choose_mu(epsilon, T::LN_2())?;
    let r = data.max_row_norm();
    let l = (T::lit(4.0) * T::from_usize_lossy(data.n()) * r * r / mu).max(T::min_positive_value());
    Ok(F1Svm { data: data.clone(), labels, lambda, mu, l })
}

impl<T: Scalar> F1Svm<T> {
    /// Unsmoothed `J(w)`.
    pub fn exact_objective(&self, w: ArrayView1<T>) -> Result<T> {
        Ok(T::lit(0.5) * self.lambda * w.dot(&w) + f1_max_loss(self.data.x.dot(&w).view(), &self.labels)?)
    }

    /// Training F1 of `sign(xᵢᵀw)` (ties predict `+1`).
    pub fn training_f1(&self, w: ArrayView1<T>) -> T {
        let s = self.data.x.dot(&w);
        let (mut tp, mut fp, mut fneg) = (0usize, 0usize, 0usize);
        for (&si, &y) in s.iter().zip(&self.labels) {
            match (si >= T::zero(), y == 1) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fneg += 1,
                _ => {}
            }
        }
        let den = 2 * tp + fp + fneg;
        if den == 0 {
            T::one()
        } else {
            T::from_usize_lossy(2 * tp) / T::from_usize_lossy(den)
        }
    }
}

impl<T: Scalar> CompositeProblem<T> for F1Svm<T> {
    fn dim(&self) -> usize {
        self.data.p()
    }

    fn geometry(&self) -> BregmanGeometry {
        BregmanGeometry::Euclidean
    }

    fn smooth(&self, w: ArrayView1<T>) -> Result<(T, Array1<T>)> {
        let (g, v) = f1_smoothed_gradient(w, self.data.x.view(), &self.labels, self.mu)?;
        Ok((v, g))
    }

    fn regularizer(&self, w: ArrayView1<T>) -> T {
        T::lit(0.5) * self.lambda * w.dot(&w)
    }

    fn prox(&self, theta: ArrayView1<T>, beta: T, tau: T) -> Result<ProxPoint<T>> {
        Ok(ProxPoint::plain(theta.mapv(|t| beta * t / (beta + tau * self.lambda))))
    }

    fn lambda2(&self) -> T {
        self.lambda
    }

    fn lipschitz(&self) -> Option<T> {
        Some(self.l)
    }
}
