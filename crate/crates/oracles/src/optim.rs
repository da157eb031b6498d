use std::time::Instant;

use crate::OracleReport;

/// Projected subgradient method with steps `step0/√k`, returning the best iterate.
pub fn subgradient_minimize<F, P>(f: F, project: P, x0: &[f64], iters: usize, step0: f64) -> OracleReport
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
    P: Fn(&mut [f64]),
{
    let start = Instant::now();
    let mut x = x0.to_vec();
    project(&mut x);
    let (mut best_f, _) = f(&x);
    let mut best_x = x.clone();
    for k in 1..=iters {
        let (fx, g) = f(&x);
        if fx < best_f {
            best_f = fx;
            best_x.copy_from_slice(&x);
        }
        let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gn == 0.0 {
            break;
        }
        let step = step0 / (k as f64).sqrt() / gn;
        for (xi, gi) in x.iter_mut().zip(&g) {
            *xi -= step * gi;
        }
        project(&mut x);
    }
    let (fx, _) = f(&x);
    if fx < best_f {
        best_f = fx;
        best_x = x;
    }
    OracleReport {
        value: best_f,
        point: best_x,
        method: "projected subgradient, step0/sqrt(k)",
        tolerance: f64::NAN,
        seed: None,
        wall_time: start.elapsed(),
    }
}

/// Exact `λ/2‖w‖² + min_b (1/n)Σ[1 − yᵢ(xᵢᵀw + b)]₊`, scanning all breakpoints after a sort.
pub fn svm_objective_exact(w: &[f64], x: &[Vec<f64>], y: &[f64], lambda: f64) -> (f64, f64) {
    let n = x.len();
    let s: Vec<f64> = x.iter().map(|r| r.iter().zip(w).map(|(a, b)| a * b).sum()).collect();
    // breakpoints bᵢ = yᵢ − sᵢ; risk is convex piecewise linear in b
    let mut bps: Vec<f64> = (0..n).map(|i| y[i] - s[i]).collect();
    bps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let risk = |b: f64| (0..n).map(|i| (1.0 - y[i] * (s[i] + b)).max(0.0)).sum::<f64>() / n as f64;
    // ternary search over breakpoint indices of a convex sequence
    let (mut lo, mut hi) = (0usize, n - 1);
    while hi - lo > 2 {
        let m1 = lo + (hi - lo) / 3;
        let m2 = hi - (hi - lo) / 3;
        if risk(bps[m1]) <= risk(bps[m2]) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let (b, r) = (lo..=hi).map(|k| (bps[k], risk(bps[k]))).min_by(|a, b| a.1.partial_cmp(&b.1).unwrap()).unwrap();
    (0.5 * lambda * w.iter().map(|v| v * v).sum::<f64>() + r, b)
}

/// Reference `J*` for the SVM with bias: subgradient descent on `(w, b)` jointly,
/// then the exact objective of the best `w`.
pub fn svm_subgradient_reference(x: &[Vec<f64>], y: &[f64], lambda: f64, iters: usize, step0: f64) -> OracleReport {
    let n = x.len();
    let p = x[0].len();
    let f = |v: &[f64]| {
        let (w, b) = v.split_at(p);
        let mut g = vec![0.0; p + 1];
        let mut risk = 0.0;
        for i in 0..n {
            let m = y[i] * (x[i].iter().zip(w).map(|(a, c)| a * c).sum::<f64>() + b[0]);
            if m < 1.0 {
                risk += 1.0 - m;
                for j in 0..p {
                    g[j] -= y[i] * x[i][j] / n as f64;
                }
                g[p] -= y[i] / n as f64;
            }
        }
        for j in 0..p {
            g[j] += lambda * w[j];
        }
        (0.5 * lambda * w.iter().map(|v| v * v).sum::<f64>() + risk / n as f64, g)
    };
    let mut rep = subgradient_minimize(f, |_| {}, &vec![0.0; p + 1], iters, step0);
    let w = &rep.point[..p];
    let (j, _) = svm_objective_exact(w, x, y, lambda);
    rep.value = rep.value.min(j);
    rep.method = "subgradient on (w, b), exact bias at the best w";
    rep
}

/// FISTA with constant step `1/L` and a projection as prox.
pub fn fista<F, P>(grad: F, project: P, x0: &[f64], l: f64, iters: usize) -> Vec<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
    P: Fn(&[f64]) -> Vec<f64>,
{
    let mut x = project(x0);
    let mut y = x.clone();
    let mut t = 1.0f64;
    for _ in 0..iters {
        let g = grad(&y);
        let step: Vec<f64> = y.iter().zip(&g).map(|(a, b)| a - b / l).collect();
        let xn = project(&step);
        let tn = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        y = xn.iter().zip(&x).map(|(a, b)| a + (t - 1.0) / tn * (a - b)).collect();
        x = xn;
        t = tn;
    }
    x
}

/// Minimizes `f` over `{w ∈ [0, ν]ⁿ : Σw = 1}` by a coarse lattice followed by
/// shrinking local lattices around the incumbent.
pub fn grid_minimize_capped_simplex<F: Fn(&[f64]) -> f64>(f: F, n: usize, cap: f64, steps: usize, levels: usize) -> OracleReport {
    assert!(n >= 2);
    let start = Instant::now();
    let feasible = |w: &[f64]| w.iter().all(|&v| v >= -1e-15 && v <= cap + 1e-15);
    let mut best = (f64::INFINITY, vec![1.0 / n as f64; n]);
    // coarse: compositions of `steps` into n parts
    let mut idx = vec![0usize; n - 1];
    loop {
        let used: usize = idx.iter().sum();
        if used <= steps {
            let mut w: Vec<f64> = idx.iter().map(|&k| k as f64 / steps as f64).collect();
            w.push((steps - used) as f64 / steps as f64);
            if feasible(&w) {
                let v = f(&w);
                if v < best.0 {
                    best = (v, w);
                }
            }
        }
        let mut j = 0;
        loop {
            if j == n - 1 {
                return refine(f, best, cap, steps, levels, start);
            }
            idx[j] += 1;
            if idx[j] <= steps {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

fn refine<F: Fn(&[f64]) -> f64>(
    f: F,
    mut best: (f64, Vec<f64>),
    cap: f64,
    steps: usize,
    levels: usize,
    start: Instant,
) -> OracleReport {
    let n = best.1.len();
    let mut h = 1.0 / steps as f64;
    let k = 6i64;
    for _ in 0..levels {
        let step = h / k as f64;
        let center = best.1.clone();
        let mut off = vec![-k; n - 1];
        loop {
            let mut w: Vec<f64> = (0..n - 1).map(|j| center[j] + off[j] as f64 * step).collect();
            w.push(1.0 - w.iter().sum::<f64>());
            if w.iter().all(|&v| v >= 0.0 && v <= cap) {
                let v = f(&w);
                if v < best.0 {
                    best = (v, w);
                }
            }
            let mut j = 0;
            loop {
                if j == n - 1 {
                    break;
                }
                off[j] += 1;
                if off[j] <= k {
                    break;
                }
                off[j] = -k;
                j += 1;
            }
            if j == n - 1 {
                break;
            }
        }
        h = 2.0 * step;
    }
    OracleReport {
        value: best.0,
        point: best.1,
        method: "lattice search with local refinement",
        tolerance: h,
        seed: None,
        wall_time: start.elapsed(),
    }
}
