#![allow(dead_code)]

use agm_core::subproblem::gibbs;
use agm_core::{BregmanGeometry, CompositeProblem, ProxPoint, Result};
use ndarray::{Array1, Array2, ArrayView1};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Array2<f64> {
    Array2::from_shape_fn((r, c), |_| StandardNormal.sample(rng))
}

pub fn normal_vector(rng: &mut ChaCha8Rng, n: usize) -> Array1<f64> {
    Array1::from_shape_fn(n, |_| StandardNormal.sample(rng))
}

pub fn rows(a: &Array2<f64>) -> Vec<Vec<f64>> {
    a.rows().into_iter().map(|r| r.to_vec()).collect()
}

/// Uniform point on the probability simplex.
pub fn simplex_point(rng: &mut ChaCha8Rng, n: usize) -> Array1<f64> {
    let e: Array1<f64> = (0..n).map(|_| -(rng.gen::<f64>().max(1e-300)).ln()).collect();
    let s = e.sum();
    e / s
}

/// `½xᵀHx − bᵀx + λ₂/2‖x‖²` over a box (or all of ℝᵖ), Euclidean geometry.
#[derive(Debug, Clone)]
pub struct QuadBox {
    pub h: Array2<f64>,
    pub b: Array1<f64>,
    pub lam1: f64,
    pub lam2: f64,
    pub lo: f64,
    pub hi: f64,
    pub l: f64,
}

impl QuadBox {
    /// `H = BᵀB/p + λ₁I`, so `f` is `λ₁`-strongly convex.
    pub fn random(seed: u64, p: usize, lam1: f64, lam2: f64, bounds: Option<(f64, f64)>) -> Self {
        let mut r = rng(seed);
        let bm = normal_matrix(&mut r, p, p);
        let mut h = bm.t().dot(&bm) / p as f64;
        for i in 0..p {
            h[[i, i]] += lam1;
        }
        let b = normal_vector(&mut r, p) * 2.0;
        let (l, _) = agm_oracles::sym_eigen_max(&rows(&h));
        let (lo, hi) = bounds.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
        Self { h, b, lam1, lam2, lo, hi, l }
    }

    pub fn in_box(&self, x: ArrayView1<f64>) -> bool {
        x.iter().all(|&v| v >= self.lo - 1e-12 && v <= self.hi + 1e-12)
    }

    /// Unconstrained minimizer `(H + λ₂I)⁻¹b`.
    pub fn unconstrained_opt(&self) -> Array1<f64> {
        let mut m = self.h.clone();
        for i in 0..m.nrows() {
            m[[i, i]] += self.lam2;
        }
        Array1::from(agm_oracles::solve_linear(&rows(&m), self.b.as_slice().unwrap()).unwrap())
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Array1<f64> {
        let (lo, hi) = if self.lo.is_finite() { (self.lo, self.hi) } else { (-3.0, 3.0) };
        (0..self.b.len()).map(|_| rng.gen_range(lo..=hi)).collect()
    }
}

impl CompositeProblem<f64> for QuadBox {
    fn dim(&self) -> usize {
        self.b.len()
    }

    fn geometry(&self) -> BregmanGeometry {
        BregmanGeometry::Euclidean
    }

    fn smooth(&self, x: ArrayView1<f64>) -> Result<(f64, Array1<f64>)> {
        let hx = self.h.dot(&x);
        Ok((0.5 * x.dot(&hx) - self.b.dot(&x), hx - &self.b))
    }

    fn regularizer(&self, x: ArrayView1<f64>) -> f64 {
        if self.in_box(x) {
            0.5 * self.lam2 * x.dot(&x)
        } else {
            f64::INFINITY
        }
    }

    fn prox(&self, theta: ArrayView1<f64>, beta: f64, tau: f64) -> Result<ProxPoint<f64>> {
        let s = beta / (beta + tau * self.lam2);
        Ok(ProxPoint::plain(theta.mapv(|t| (t * s).clamp(self.lo, self.hi))))
    }

    fn lambda1(&self) -> f64 {
        self.lam1
    }

    fn lambda2(&self) -> f64 {
        self.lam2
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(self.l)
    }

    fn domain_radius(&self, u0: ArrayView1<f64>) -> Option<f64> {
        self.lo.is_finite().then(|| {
            0.5 * u0.iter().map(|&u| (u - self.lo).powi(2).max((self.hi - u).powi(2))).sum::<f64>()
        })
    }
}

/// `½xᵀHx − bᵀx + λ₂·KL(x, c)` over the simplex, entropy geometry.
#[derive(Debug, Clone)]
pub struct QuadSimplex {
    pub h: Array2<f64>,
    pub b: Array1<f64>,
    pub c: Array1<f64>,
    pub lam2: f64,
    /// `max |Hᵢⱼ|`, the constant wrt `‖·‖₁`.
    pub l: f64,
}

impl QuadSimplex {
    pub fn random(seed: u64, n: usize, lam2: f64) -> Self {
        let mut r = rng(seed);
        let bm = normal_matrix(&mut r, n, n);
        let h = bm.t().dot(&bm) / n as f64;
        let b = normal_vector(&mut r, n);
        let c = simplex_point(&mut r, n).mapv(|v| 0.5 * v + 0.5 / n as f64);
        let l = h.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        Self { h, b, c, lam2, l }
    }

    pub fn in_simplex(x: ArrayView1<f64>) -> bool {
        x.iter().all(|&v| v >= 0.0) && (x.sum() - 1.0).abs() <= 1e-9
    }
}

impl CompositeProblem<f64> for QuadSimplex {
    fn dim(&self) -> usize {
        self.b.len()
    }

    fn geometry(&self) -> BregmanGeometry {
        BregmanGeometry::Entropy
    }

    fn smooth(&self, x: ArrayView1<f64>) -> Result<(f64, Array1<f64>)> {
        let hx = self.h.dot(&x);
        Ok((0.5 * x.dot(&hx) - self.b.dot(&x), hx - &self.b))
    }

    fn regularizer(&self, x: ArrayView1<f64>) -> f64 {
        if !Self::in_simplex(x) {
            return f64::INFINITY;
        }
        if self.lam2 == 0.0 {
            return 0.0;
        }
        self.lam2 * BregmanGeometry::Entropy.divergence(x, self.c.view()).unwrap()
    }

    fn prox(&self, theta: ArrayView1<f64>, beta: f64, tau: f64) -> Result<ProxPoint<f64>> {
        let tl = tau * self.lam2;
        let center = self.c.mapv(|v| v.ln() + 1.0);
        let logits = (&theta * beta + &center * tl) / (beta + tl);
        Ok(ProxPoint::plain(gibbs(logits.view(), 1.0)))
    }

    fn lambda2(&self) -> f64 {
        self.lam2
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(self.l)
    }

    fn domain_radius(&self, u0: ArrayView1<f64>) -> Option<f64> {
        Some(-u0.iter().copied().fold(f64::INFINITY, f64::min).ln())
    }
}

/// Relative comparison used by the invariant checks.
pub fn le_rel(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs <= rhs + tol * lhs.abs().max(rhs.abs()).max(1.0)
}
