/// Euclidean projection onto `{x : Σxᵢ = total, x ≥ 0}` by sorting.
pub fn project_simplex(v: &[f64], total: f64) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (k, &x) in s.iter().enumerate() {
        acc += x;
        let t = (acc - total) / (k + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

pub fn project_box(v: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    v.iter().map(|&x| x.clamp(lo, hi)).collect()
}

/// Projection onto `{w : γ‖w‖₁ + ½‖w‖² ≤ r}` via bisection on the constraint
/// multiplier `ν`, using `w(ν) = soft(g, νγ)/(1 + ν)`.
pub fn elastic_ball_project_bisect(g: &[f64], gamma: f64, r: f64) -> Vec<f64> {
    let h = |w: &[f64]| gamma * w.iter().map(|v| v.abs()).sum::<f64>() + 0.5 * w.iter().map(|v| v * v).sum::<f64>();
    let w_of = |nu: f64| -> Vec<f64> {
        g.iter().map(|&x| x.signum() * (x.abs() - nu * gamma).max(0.0) / (1.0 + nu)).collect()
    };
    if h(g) <= r {
        return g.to_vec();
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while h(&w_of(hi)) > r {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(&w_of(mid)) > r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    w_of(hi)
}

/// `wᵢ = min(ν, exp(ℓᵢ + τ))` with `Σw = total`, by bisection on `τ`.
pub fn capped_simplex_gibbs_bisect(logits: &[f64], cap: f64, total: f64) -> Vec<f64> {
    let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum = |tau: f64| logits.iter().map(|&l| (l - top + tau).exp().min(cap)).sum::<f64>();
    let (mut lo, mut hi) = (-800.0, 800.0);
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if sum(mid) < total {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau = 0.5 * (lo + hi);
    logits.iter().map(|&l| (l - top + tau).exp().min(cap)).collect()
}
