//! Entropy-smoothed F1 multivariate loss via an O(n²) dynamic program.
//!
//! With scores `sᵢ = xᵢᵀw`, the smoothed maximizer is the distribution
//! `α*(y′) ∝ exp(Σᵢ y′ᵢsᵢ/μ + (n/μ)Δ(y′, y))` with total mass `1/n`, where `Δ`
//! is the F1 score. `Δ` depends on `y′` only through the false-negative count
//! `b` and false-positive count `c`, so the sum over `2ⁿ` labelings factors
//! into lattice walks over each class. Everything is kept in log space.

use std::sync::atomic::{AtomicU64, Ordering};

use ndarray::{Array1, ArrayView1, ArrayView2};

use crate::error::{AgmError, Result};
use crate::scalar::{log_add_exp, log_sum_exp, Scalar};

static CELLS: AtomicU64 = AtomicU64::new(0);

/// Total DP table cells written by this process so far.
pub fn cells_touched() -> u64 {
    CELLS.load(Ordering::Relaxed)
}

/// `2a/(2a+b+c)` with `a = n₊ − b`.
pub fn f1_delta<T: Scalar>(b: usize, c: usize, n_plus: usize) -> T {
    let a = n_plus.saturating_sub(b);
    let den = 2 * a + b + c;
    if den == 0 {
        return T::one();
    }
    T::from_usize_lossy(2 * a) / T::from_usize_lossy(den)
}

/// Scores, labels and smoothing parameter of one evaluation.
#[derive(Debug, Clone)]
pub struct F1Instance<T> {
    pub scores: Array1<T>,
    pub labels: Vec<i8>,
    pub mu: T,
    pub n_plus: usize,
    pub n_minus: usize,
    /// Positives first, each class in original order.
    pub permutation: Vec<usize>,
}

impl<T: Scalar> F1Instance<T> {
    pub fn new(scores: Array1<T>, labels: &[i8], mu: T) -> Result<Self> {
        if scores.len() != labels.len() {
            return Err(AgmError::Input(format!("{} scores but {} labels", scores.len(), labels.len())));
        }
        if !(mu > T::zero()) {
            return Err(AgmError::Config("smoothing parameter must be positive".into()));
        }
        if labels.iter().any(|&y| y != 1 && y != -1) {
            return Err(AgmError::Input("labels must be +1 or -1".into()));
        }
        let mut permutation: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == 1).collect();
        let n_plus = permutation.len();
        permutation.extend((0..labels.len()).filter(|&i| labels[i] == -1));
        let n_minus = labels.len() - n_plus;
        if n_plus == 0 || n_minus == 0 {
            return Err(AgmError::Input("F1 needs at least one example of each class".into()));
        }
        Ok(Self { scores, labels: labels.to_vec(), mu, n_plus, n_minus, permutation })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Lower-triangular table `t[k][v]`, `0 ≤ v ≤ k ≤ m`.
#[derive(Debug, Clone)]
pub struct Triangle<T> {
    data: Vec<T>,
    m: usize,
}

impl<T: Scalar> Triangle<T> {
    fn new(m: usize) -> Self {
        Self { data: vec![T::neg_infinity(); (m + 1) * (m + 2) / 2], m }
    }

    fn idx(k: usize, v: usize) -> usize {
        k * (k + 1) / 2 + v
    }

    /// Log value at `(k, v)`; `−∞` outside `0 ≤ v ≤ k`.
    pub fn get(&self, k: usize, v: isize) -> T {
        if v < 0 || v as usize > k {
            T::neg_infinity()
        } else {
            self.data[Self::idx(k, v as usize)]
        }
    }

    fn set(&mut self, k: usize, v: usize, x: T) {
        self.data[Self::idx(k, v)] = x;
        CELLS.fetch_add(1, Ordering::Relaxed);
    }

    pub fn last_row(&self) -> Vec<T> {
        (0..=self.m).map(|v| self.get(self.m, v as isize)).collect()
    }
}

/// Forward lattice over one class. `log_edge[k]` is the log weight of the
/// transition that keeps the error count; the error-incrementing transition
/// uses `incr_sign·log_edge[k]`, the keeping one `−incr_sign·log_edge[k]`.
fn forward<T: Scalar>(log_edge: &[T], incr_sign: T) -> Triangle<T> {
    let m = log_edge.len();
    let mut t = Triangle::new(m);
    t.set(0, 0, T::zero());
    for k in 1..=m {
        let l = log_edge[k - 1];
        for v in 0..=k {
            let up = t.get(k - 1, v as isize - 1) + incr_sign * l;
            let stay = t.get(k - 1, v as isize) - incr_sign * l;
            t.set(k, v, log_add_exp(up, stay));
        }
    }
    t
}

/// Backward lattice: `t[m][v] = terminal[v]`, `t[k−1][v]` sums over the k-th step.
fn backward<T: Scalar>(log_edge: &[T], incr_sign: T, terminal: &[T]) -> Triangle<T> {
    let m = log_edge.len();
    let mut t = Triangle::new(m);
    for (v, &x) in terminal.iter().enumerate() {
        t.set(m, v, x);
    }
    for k in (1..=m).rev() {
        let l = log_edge[k - 1];
        for v in 0..k {
            let stay = t.get(k, v as isize) - incr_sign * l;
            let up = t.get(k, v as isize + 1) + incr_sign * l;
            t.set(k - 1, v, log_add_exp(stay, up));
        }
    }
    t
}

/// `log V₊(b)` for positives with `log cₖ = sₖ/μ`: predicting `−1` (a false
/// negative) carries `1/cₖ`, predicting `+1` carries `cₖ`.
pub fn log_v_plus<T: Scalar>(log_c: &[T]) -> Vec<T> {
    forward(log_c, -T::one()).last_row()
}

/// `log V₋(c)` for negatives: predicting `+1` (a false positive) carries `cₖ`.
pub fn log_v_minus<T: Scalar>(log_c: &[T]) -> Vec<T> {
    forward(log_c, T::one()).last_row()
}

/// Normalizer and marginals of `α*`.
#[derive(Debug, Clone)]
pub struct F1Marginals<T> {
    /// `ln Σ_{y′} exp(Σ y′ᵢsᵢ/μ + (n/μ)Δ)`.
    pub log_z: T,
    /// `p(y′ᵢ = +1)`, original order; masses sum to `1/n` per example with `p_minus`.
    pub p_plus: Array1<T>,
    pub p_minus: Array1<T>,
    /// `p(y′ᵢ = −yᵢ)`.
    pub p_flip: Array1<T>,
}

pub fn f1_marginals<T: Scalar>(inst: &F1Instance<T>) -> F1Marginals<T> {
    let n = inst.len();
    let (np, nm) = (inst.n_plus, inst.n_minus);
    let (pos, neg) = inst.permutation.split_at(np);
    let lc_pos: Vec<T> = pos.iter().map(|&i| inst.scores[i] / inst.mu).collect();
    let lc_neg: Vec<T> = neg.iter().map(|&i| inst.scores[i] / inst.mu).collect();
    let scale = T::from_usize_lossy(n) / inst.mu;

    let fwd_p = forward(&lc_pos, -T::one());
    let fwd_n = forward(&lc_neg, T::one());
    let vp = fwd_p.last_row();
    let vm = fwd_n.last_row();
    let eta_minus: Vec<T> = (0..=np)
        .map(|b| log_sum_exp((0..=nm).map(|c| scale * f1_delta::<T>(b, c, np) + vm[c])))
        .collect();
    let eta_plus: Vec<T> = (0..=nm)
        .map(|c| log_sum_exp((0..=np).map(|b| scale * f1_delta::<T>(b, c, np) + vp[b])))
        .collect();
    let log_z = log_sum_exp((0..=np).map(|b| vp[b] + eta_minus[b]));
    let bwd_p = backward(&lc_pos, -T::one(), &eta_minus);
    let bwd_n = backward(&lc_neg, T::one(), &eta_plus);

    let norm = log_z + T::from_usize_lossy(n).ln();
    let mut p_plus = Array1::zeros(n);
    let mut p_minus = Array1::zeros(n);
    for (k, &i) in pos.iter().enumerate() {
        let l = lc_pos[k];
        let plus = log_sum_exp((0..=k).map(|v| fwd_p.get(k, v as isize) + l + bwd_p.get(k + 1, v as isize)));
        let minus =
            log_sum_exp((0..=k).map(|v| fwd_p.get(k, v as isize) - l + bwd_p.get(k + 1, v as isize + 1)));
        p_plus[i] = (plus - norm).exp();
        p_minus[i] = (minus - norm).exp();
    }
    for (k, &i) in neg.iter().enumerate() {
        let l = lc_neg[k];
        let plus = log_sum_exp((0..=k).map(|v| fwd_n.get(k, v as isize) + l + bwd_n.get(k + 1, v as isize + 1)));
        let minus = log_sum_exp((0..=k).map(|v| fwd_n.get(k, v as isize) - l + bwd_n.get(k + 1, v as isize)));
        p_plus[i] = (plus - norm).exp();
        p_minus[i] = (minus - norm).exp();
    }
    let p_flip = Array1::from_iter((0..n).map(|i| if inst.labels[i] == 1 { p_minus[i] } else { p_plus[i] }));
    F1Marginals { log_z, p_plus, p_minus, p_flip }
}

/// `g*_μ(Aw)` with the entropy prox centered at its minimizer:
/// `(μ ln Z − Σyᵢsᵢ)/n − μ ln 2`.
pub fn f1_smoothed_value<T: Scalar>(inst: &F1Instance<T>, log_z: T) -> T {
    let ys: T = inst.scores.iter().zip(&inst.labels).map(|(&s, &y)| if y == 1 { s } else { -s }).sum();
    (inst.mu * log_z - ys) / T::from_usize_lossy(inst.len()) - inst.mu * T::LN_2()
}

/// Gradient `−2Σ p(y′ᵢ=−yᵢ)yᵢxᵢ` and value of `w ↦ g*_μ(Aw)`; `x` holds one example per row.
pub fn f1_smoothed_gradient<T: Scalar>(
    w: ArrayView1<T>,
    x: ArrayView2<T>,
    labels: &[i8],
    mu: T,
) -> Result<(Array1<T>, T)> {
    if x.ncols() != w.len() {
        return Err(AgmError::Input(format!("w has {} entries, data has {} features", w.len(), x.ncols())));
    }
    let inst = F1Instance::new(x.dot(&w), labels, mu)?;
    let m = f1_marginals(&inst);
    let coef = Array1::from_iter(
        m.p_flip.iter().zip(labels).map(|(&p, &y)| if y == 1 { -T::lit(2.0) * p } else { T::lit(2.0) * p }),
    );
    Ok((x.t().dot(&coef), f1_smoothed_value(&inst, m.log_z)))
}

/// `max_{y′} [Δ(y′, y) + (1/n)Σ(y′ᵢ − yᵢ)sᵢ]`, exact in O(n log n) per class split.
pub fn f1_max_loss<T: Scalar>(scores: ArrayView1<T>, labels: &[i8]) -> Result<T> {
    let inst = F1Instance::new(scores.to_owned(), labels, T::one())?;
    let n = T::from_usize_lossy(inst.len());
    let (pos, neg) = inst.permutation.split_at(inst.n_plus);
    // flipping a positive costs 2sᵢ/n; flipping a negative gains 2sᵢ/n
    let mut pos_s: Vec<T> = pos.iter().map(|&i| scores[i]).collect();
    let mut neg_s: Vec<T> = neg.iter().map(|&i| scores[i]).collect();
    pos_s.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    neg_s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let two = T::lit(2.0);
    let mut best = T::neg_infinity();
    let mut cost_b = T::zero();
    for b in 0..=pos_s.len() {
        if b > 0 {
            cost_b -= two * pos_s[b - 1] / n;
        }
        let mut gain_c = T::zero();
        for c in 0..=neg_s.len() {
            if c > 0 {
                gain_c += two * neg_s[c - 1] / n;
            }
            best = best.max(f1_delta::<T>(b, c, inst.n_plus) + cost_b + gain_c);
        }
    }
    Ok(best)
}
