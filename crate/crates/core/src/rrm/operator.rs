use ndarray::{Array1, Array2, ArrayView1};

use crate::error::Result;
use crate::scalar::Scalar;
use crate::smoothing::power_iteration;

/// A linear map `A` and its adjoint.
pub trait LinearOperator<T: Scalar> {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn apply(&self, w: ArrayView1<T>) -> Array1<T>;
    fn apply_adjoint(&self, alpha: ArrayView1<T>) -> Array1<T>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator<T> {
    pub a: Array2<T>,
}

impl<T: Scalar> LinearOperator<T> for DenseOperator<T> {
    fn rows(&self) -> usize {
        self.a.nrows()
    }

    fn cols(&self) -> usize {
        self.a.ncols()
    }

    fn apply(&self, w: ArrayView1<T>) -> Array1<T> {
        self.a.dot(&w)
    }

    fn apply_adjoint(&self, alpha: ArrayView1<T>) -> Array1<T> {
        self.a.t().dot(&alpha)
    }
}

/// `‖A‖₂ = √λmax(AᵀA)` by power iteration.
pub fn estimate_operator_norm<T: Scalar, A: LinearOperator<T> + ?Sized>(op: &A, iters: usize) -> Result<T> {
    let scale = {
        // ‖AᵀA‖ ≤ ‖A‖_F², a cheap scale for the residual test
        let mut s = T::zero();
        for j in 0..op.cols() {
            let mut e = Array1::zeros(op.cols());
            e[j] = T::one();
            let c = op.apply(e.view());
            s += c.dot(&c);
        }
        s
    };
    if scale == T::zero() {
        return Ok(T::zero());
    }
    let pr = power_iteration(op.cols(), |v| op.apply_adjoint(op.apply(v).view()), iters, T::lit(1e-10), scale)?;
    Ok(pr.value.max(T::zero()).sqrt())
}

/// `√n·R`, the bound `‖A‖² ≤ nR²` for `A` with rows of norm at most `R`.
pub fn row_norm_bound<T: Scalar>(n: usize, r: T) -> T {
    T::from_usize_lossy(n).sqrt() * r
}
