use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Central differences `(f(x + heᵢ) − f(x − heᵢ))/2h`.
pub fn finite_difference_grad<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], h: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    (0..x.len())
        .map(|i| {
            y[i] = x[i] + h;
            let fp = f(&y);
            y[i] = x[i] - h;
            let fm = f(&y);
            y[i] = x[i];
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

fn to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    let p = rows.first().map_or(0, |r| r.len());
    DMatrix::from_fn(n, p, |i, j| rows[i][j])
}

/// Dominant eigenpair of a symmetric matrix by a full dense decomposition.
pub fn sym_eigen_max(m: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let eig = SymmetricEigen::new(to_matrix(m));
    let (k, &val) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .expect("empty matrix");
    (val, eig.eigenvectors.column(k).iter().copied().collect())
}

/// Solves `Mx = b` by LU.
pub fn solve_linear(m: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let sol = to_matrix(m).lu().solve(&DVector::from_column_slice(b))?;
    Some(sol.iter().copied().collect())
}

/// `((2/n)XᵀX + λI)⁻¹ (2/n)Xᵀy`, the minimizer of `(1/n)‖y − Xw‖² + (λ/2)‖w‖²`.
pub fn ridge_solve(x: &[Vec<f64>], y: &[f64], lambda: f64) -> Vec<f64> {
    let xm = to_matrix(x);
    let n = x.len() as f64;
    let p = xm.ncols();
    let a = xm.transpose() * &xm * (2.0 / n) + DMatrix::identity(p, p) * lambda;
    let rhs = xm.transpose() * DVector::from_column_slice(y) * (2.0 / n);
    a.cholesky().expect("ridge system is positive definite").solve(&rhs).iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_of_half_norm() {
        let g = finite_difference_grad(|x| 0.5 * x.iter().map(|v| v * v).sum::<f64>(), &[1.0, -2.0], 1e-5);
        assert!((g[0] - 1.0).abs() < 1e-9 && (g[1] + 2.0).abs() < 1e-9);
    }

    #[test]
    fn eigen_of_diag() {
        let (l, v) = sym_eigen_max(&[vec![1.0, 0.0], vec![0.0, 3.0]]);
        assert!((l - 3.0).abs() < 1e-14 && (v[1].abs() - 1.0).abs() < 1e-14);
    }
}
