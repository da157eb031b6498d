//! Prox functions, Bregman divergences and the compressed estimate model.
//!
//! Both geometries have a mirror map `∇d` that is a bijection onto its range, so any
//! weighted sum of divergences plus a linear term collapses to a single weighted
//! divergence around a center given in mirror coordinates `θ = ∇d(center)`.

use ndarray::{Array1, ArrayView1, Zip};

use crate::error::{AgmError, Result};
use crate::scalar::Scalar;

/// Coordinates below this are clamped before taking logarithms.
pub const ENTROPY_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormKind {
    L1,
    L2,
}

/// Prox function `d`, 1-strongly convex with respect to its [`NormKind`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BregmanGeometry {
    /// `d(x) = ½‖x‖²` on ℝᵖ, strongly convex wrt L2.
    Euclidean,
    /// `d(x) = Σ xᵢ ln xᵢ` on the nonnegative orthant, strongly convex wrt L1 on the simplex.
    Entropy,
}

impl BregmanGeometry {
    pub fn sigma<T: Scalar>(&self) -> T {
        T::one()
    }

    pub fn norm(&self) -> NormKind {
        match self {
            BregmanGeometry::Euclidean => NormKind::L2,
            BregmanGeometry::Entropy => NormKind::L1,
        }
    }

    /// Norm in which `d` is strongly convex.
    pub fn primal_norm<T: Scalar>(&self, v: ArrayView1<T>) -> T {
        match self.norm() {
            NormKind::L2 => v.dot(&v).sqrt(),
            NormKind::L1 => v.iter().map(|x| x.abs()).sum(),
        }
    }

    fn check_domain<T: Scalar>(&self, x: ArrayView1<T>, what: &str) -> Result<()> {
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(AgmError::Domain(format!("{what}[{i}] is not finite")));
        }
        if *self == BregmanGeometry::Entropy {
            if let Some(i) = x.iter().position(|v| *v < T::zero()) {
                return Err(AgmError::Domain(format!("{what}[{i}] is negative under entropy")));
            }
        }
        Ok(())
    }

    /// `d(x)`. Zero coordinates contribute 0 under entropy.
    pub fn value<T: Scalar>(&self, x: ArrayView1<T>) -> Result<T> {
        self.check_domain(x, "x")?;
        Ok(self.value_unchecked(x))
    }

    pub(crate) fn value_unchecked<T: Scalar>(&self, x: ArrayView1<T>) -> T {
        match self {
            BregmanGeometry::Euclidean => T::lit(0.5) * x.dot(&x),
            BregmanGeometry::Entropy => x.iter().map(|&v| xlogx(v)).sum(),
        }
    }

    /// `∇d(x)`.
    pub fn gradient<T: Scalar>(&self, x: ArrayView1<T>) -> Result<Array1<T>> {
        self.check_domain(x, "x")?;
        Ok(self.gradient_unchecked(x))
    }

    pub(crate) fn gradient_unchecked<T: Scalar>(&self, x: ArrayView1<T>) -> Array1<T> {
        match self {
            BregmanGeometry::Euclidean => x.to_owned(),
            BregmanGeometry::Entropy => {
                let floor = T::lit(ENTROPY_FLOOR);
                x.mapv(|v| v.max(floor).ln() + T::one())
            }
        }
    }

    /// `(∇d)⁻¹(θ)`, the point whose mirror coordinates are `θ`.
    pub fn mirror_inverse<T: Scalar>(&self, theta: ArrayView1<T>) -> Array1<T> {
        match self {
            BregmanGeometry::Euclidean => theta.to_owned(),
            BregmanGeometry::Entropy => theta.mapv(|t| (t - T::one()).exp()),
        }
    }

    /// Convex conjugate `d*(θ)`.
    pub fn conjugate<T: Scalar>(&self, theta: ArrayView1<T>) -> T {
        match self {
            BregmanGeometry::Euclidean => T::lit(0.5) * theta.dot(&theta),
            BregmanGeometry::Entropy => theta.iter().map(|&t| (t - T::one()).exp()).sum(),
        }
    }

    /// `Δ(x, y) = d(x) − d(y) − ⟨∇d(y), x − y⟩`.
    pub fn divergence<T: Scalar>(&self, x: ArrayView1<T>, y: ArrayView1<T>) -> Result<T> {
        if x.len() != y.len() {
            return Err(AgmError::Input(format!(
                "dimension mismatch: {} vs {}",
                x.len(),
                y.len()
            )));
        }
        self.check_domain(x, "x")?;
        self.check_domain(y, "y")?;
        Ok(self.divergence_unchecked(x, y))
    }

    pub(crate) fn divergence_unchecked<T: Scalar>(&self, x: ArrayView1<T>, y: ArrayView1<T>) -> T {
        match self {
            BregmanGeometry::Euclidean => {
                let mut s = T::zero();
                Zip::from(&x).and(&y).for_each(|&a, &b| s += (a - b) * (a - b));
                T::lit(0.5) * s
            }
            BregmanGeometry::Entropy => {
                let floor = T::lit(ENTROPY_FLOOR);
                let mut s = T::zero();
                Zip::from(&x).and(&y).for_each(|&a, &b| {
                    let b = b.max(floor);
                    let t = if a > T::zero() { a * (a / b).ln() } else { T::zero() };
                    s += t - a + b;
                });
                s.max(T::zero())
            }
        }
    }

    /// `Δ(x, (∇d)⁻¹(θ)) = d(x) − ⟨θ, x⟩ + d*(θ)`, evaluated without forming the center.
    pub fn divergence_to_mirror<T: Scalar>(&self, x: ArrayView1<T>, theta: ArrayView1<T>) -> T {
        match self {
            BregmanGeometry::Euclidean => {
                let mut s = T::zero();
                Zip::from(&x).and(&theta).for_each(|&a, &t| s += (a - t) * (a - t));
                T::lit(0.5) * s
            }
            BregmanGeometry::Entropy => {
                let mut s = T::zero();
                Zip::from(&x).and(&theta).for_each(|&a, &t| {
                    let c = (t - T::one()).exp();
                    let term = if a > T::zero() { a * (a.ln() - t + T::one()) } else { T::zero() };
                    s += term - a + c;
                });
                s.max(T::zero())
            }
        }
    }
}

fn xlogx<T: Scalar>(v: T) -> T {
    if v > T::zero() {
        v * v.ln()
    } else {
        T::zero()
    }
}

/// `a·Δ(x, x*) + b`, the compressed form of `⟨s, x⟩ + Σ αᵢ Δ(x, xᵢ) + const`.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateModel<T> {
    geometry: BregmanGeometry,
    weight: T,
    /// Mirror coordinates of the center.
    theta: Array1<T>,
    offset: T,
}

impl<T: Scalar> EstimateModel<T> {
    /// `weight·Δ(x, center)`.
    pub fn new(geometry: BregmanGeometry, weight: T, center: ArrayView1<T>) -> Result<Self> {
        if !(weight > T::zero()) {
            return Err(AgmError::Input("model weight must be positive".into()));
        }
        let theta = geometry.gradient(center)?;
        Ok(Self { geometry, weight, theta, offset: T::zero() })
    }

    /// Compresses `⟨s, x⟩ + Σ αᵢ Δ(x, xᵢ)` into `a·Δ(x, x*) + b` with `a = Σ αᵢ`.
    pub fn aggregate(
        geometry: BregmanGeometry,
        s: ArrayView1<T>,
        terms: &[(T, ArrayView1<T>)],
    ) -> Result<Self> {
        if terms.iter().any(|(a, _)| *a < T::zero() || !a.is_finite()) {
            return Err(AgmError::Input("term weights must be finite and nonnegative".into()));
        }
        let a: T = terms.iter().map(|(a, _)| *a).sum();
        if !(a > T::zero()) {
            return Err(AgmError::Input("total term weight must be positive".into()));
        }
        let mut g = Array1::zeros(s.len());
        for (alpha, xi) in terms {
            if xi.len() != s.len() {
                return Err(AgmError::Input("dimension mismatch in aggregated term".into()));
            }
            g.scaled_add(*alpha, &geometry.gradient(*xi)?);
        }
        let theta = (&g - &s) / a;
        let center = geometry.mirror_inverse(theta.view());
        let mut offset = s.dot(&center);
        for (alpha, xi) in terms {
            if *alpha > T::zero() {
                offset += *alpha * geometry.divergence_unchecked(center.view(), *xi);
            }
        }
        Ok(Self { geometry, weight: a, theta, offset })
    }

    /// Adds `⟨u, x⟩ + α·Δ(x, xᵢ)` and recompresses.
    pub fn aggregate_term(&mut self, u: ArrayView1<T>, alpha: T, xi: ArrayView1<T>) -> Result<()> {
        if alpha < T::zero() || !alpha.is_finite() {
            return Err(AgmError::Input("term weight must be finite and nonnegative".into()));
        }
        if u.len() != self.theta.len() || xi.len() != self.theta.len() {
            return Err(AgmError::Input("dimension mismatch in aggregated term".into()));
        }
        let a_new = self.weight + alpha;
        let mut theta = &self.theta * self.weight - u;
        if alpha > T::zero() {
            theta.scaled_add(alpha, &self.geometry.gradient(xi)?);
        }
        theta /= a_new;
        let center = self.geometry.mirror_inverse(theta.view());
        let mut offset = self.weight * self.geometry.divergence_to_mirror(center.view(), self.theta.view())
            + self.offset
            + u.dot(&center);
        if alpha > T::zero() {
            offset += alpha * self.geometry.divergence_unchecked(center.view(), xi);
        }
        self.weight = a_new;
        self.theta = theta;
        self.offset = offset;
        Ok(())
    }

    pub fn evaluate(&self, x: ArrayView1<T>) -> T {
        self.weight * self.geometry.divergence_to_mirror(x, self.theta.view()) + self.offset
    }

    pub fn weight(&self) -> T {
        self.weight
    }

    pub fn offset(&self) -> T {
        self.offset
    }

    /// Unconstrained minimizer `x*`.
    pub fn center(&self) -> Array1<T> {
        self.geometry.mirror_inverse(self.theta.view())
    }

    pub fn mirror_center(&self) -> ArrayView1<'_, T> {
        self.theta.view()
    }

    pub fn geometry(&self) -> BregmanGeometry {
        self.geometry
    }
}
