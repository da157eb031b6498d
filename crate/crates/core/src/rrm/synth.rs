//! Reproducible synthetic datasets with features in the unit ball.

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::data::Dataset;
use crate::error::{AgmError, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SynthKind {
    /// Labels from a hidden hyperplane through the origin, with a margin gap.
    Separable { margin: f64 },
    /// Hidden-hyperplane labels flipped with probability `flip`.
    Noisy { flip: f64 },
    /// `y = w*ᵀx + noise·N(0, 1)`.
    Regression { noise: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthSpec {
    pub kind: SynthKind,
    pub n: usize,
    pub p: usize,
    /// Fraction of positive labels (classification only).
    pub pos_frac: f64,
    pub seed: u64,
}

impl SynthSpec {
    pub fn separable(n: usize, p: usize, seed: u64) -> Self {
        Self { kind: SynthKind::Separable { margin: 0.05 }, n, p, pos_frac: 0.5, seed }
    }

    pub fn noisy(n: usize, p: usize, flip: f64, seed: u64) -> Self {
        Self { kind: SynthKind::Noisy { flip }, n, p, pos_frac: 0.5, seed }
    }

    pub fn regression(n: usize, p: usize, noise: f64, seed: u64) -> Self {
        Self { kind: SynthKind::Regression { noise }, n, p, pos_frac: 0.5, seed }
    }
}

fn unit_vector(rng: &mut ChaCha8Rng, p: usize) -> Array1<f64> {
    loop {
        let v: Array1<f64> = (0..p).map(|_| StandardNormal.sample(rng)).collect();
        let nrm = v.dot(&v).sqrt();
        if nrm > 1e-12 {
            return v / nrm;
        }
    }
}

/// Uniform in the unit ball.
fn ball_point(rng: &mut ChaCha8Rng, p: usize) -> Array1<f64> {
    let r: f64 = rng.gen::<f64>().powf(1.0 / p as f64);
    unit_vector(rng, p) * r
}

pub fn generate<T: Scalar>(spec: &SynthSpec) -> Result<Dataset<T>> {
    let SynthSpec { kind, n, p, pos_frac, seed } = *spec;
    if n == 0 || p == 0 {
        return Err(AgmError::Config("n and p must be positive".into()));
    }
    if !(0.0..=1.0).contains(&pos_frac) {
        return Err(AgmError::Config("pos_frac must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w_true = unit_vector(&mut rng, p);
    let n_pos = (pos_frac * n as f64).round() as usize;
    let mut x = Array2::zeros((n, p));
    let mut y = Array1::zeros(n);
    match kind {
        SynthKind::Separable { margin } => {
            if !(0.0..0.5).contains(&margin) {
                return Err(AgmError::Config("margin must lie in [0, 0.5)".into()));
            }
            for i in 0..n {
                let label = if i < n_pos { 1.0 } else { -1.0 };
                let v = loop {
                    let mut v = ball_point(&mut rng, p);
                    let s = v.dot(&w_true);
                    if s.abs() < margin {
                        continue;
                    }
                    if s.signum() != label {
                        // reflect through the hyperplane; stays in the ball
                        v.scaled_add(-2.0 * s, &w_true);
                    }
                    break v;
                };
                x.row_mut(i).assign(&v.mapv(T::lit));
                y[i] = T::lit(label);
            }
        }
        SynthKind::Noisy { flip } => {
            if !(0.0..=1.0).contains(&flip) {
                return Err(AgmError::Config("flip probability must lie in [0, 1]".into()));
            }
            for i in 0..n {
                let label: f64 = if i < n_pos { 1.0 } else { -1.0 };
                let mut v = ball_point(&mut rng, p);
                let s = v.dot(&w_true);
                if s != 0.0 && s.signum() != label {
                    v.scaled_add(-2.0 * s, &w_true);
                }
                let observed = if rng.gen::<f64>() < flip { -label } else { label };
                x.row_mut(i).assign(&v.mapv(T::lit));
                y[i] = T::lit(observed);
            }
        }
        SynthKind::Regression { noise } => {
            if !(noise >= 0.0) {
                return Err(AgmError::Config("noise must be nonnegative".into()));
            }
            for i in 0..n {
                let v = ball_point(&mut rng, p);
                let e: f64 = StandardNormal.sample(&mut rng);
                y[i] = T::lit(v.dot(&w_true) + noise * e);
                x.row_mut(i).assign(&v.mapv(T::lit));
            }
        }
    }
    Dataset::new(x, y)
}
