fn f1(b: usize, c: usize, n_plus: usize) -> f64 {
    let a = n_plus - b;
    let den = 2 * a + b + c;
    if den == 0 {
        1.0
    } else {
        2.0 * a as f64 / den as f64
    }
}

fn lse(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Exhaustive quantities of the entropy-smoothed F1 loss at scores `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct F1Brute {
    pub log_z: f64,
    pub p_plus: Vec<f64>,
    pub p_minus: Vec<f64>,
    pub p_flip: Vec<f64>,
    /// `max_{α ∈ Q₂} ⟨u, α⟩ − g(α) − μ(d₂(α) − min d₂)`.
    pub value: f64,
    /// The unsmoothed `max_{y′} [Δ + (1/n)u_{y′}]`.
    pub max_value: f64,
}

/// Enumerates all `2ⁿ` labelings. `n ≤ 20`.
pub fn brute_force_f1(scores: &[f64], labels: &[i8], mu: f64) -> F1Brute {
    let n = scores.len();
    assert!(n <= 20 && n == labels.len() && mu > 0.0);
    let n_plus = labels.iter().filter(|&&y| y == 1).count();
    let nf = n as f64;
    let total = 1usize << n;
    let mut expo = Vec::with_capacity(total);
    let mut u = Vec::with_capacity(total);
    let mut delta = Vec::with_capacity(total);
    for mask in 0..total {
        let (mut b, mut c, mut sy, mut uu) = (0, 0, 0.0, 0.0);
        for i in 0..n {
            let yp = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
            let y = labels[i] as f64;
            if labels[i] == 1 && yp < 0.0 {
                b += 1;
            }
            if labels[i] == -1 && yp > 0.0 {
                c += 1;
            }
            sy += yp * scores[i];
            uu += (yp - y) * scores[i];
        }
        let d = f1(b, c, n_plus);
        expo.push(sy / mu + nf / mu * d);
        u.push(uu);
        delta.push(d);
    }
    let log_z = lse(&expo);
    let alpha: Vec<f64> = expo.iter().map(|e| (e - log_z).exp() / nf).collect();
    let mut p_plus = vec![0.0; n];
    let mut p_minus = vec![0.0; n];
    for (mask, &a) in alpha.iter().enumerate() {
        for i in 0..n {
            if mask >> i & 1 == 1 {
                p_plus[i] += a;
            } else {
                p_minus[i] += a;
            }
        }
    }
    let p_flip = (0..n).map(|i| if labels[i] == 1 { p_minus[i] } else { p_plus[i] }).collect();
    // entropy minimum over the scaled simplex: uniform mass 1/(n·2ⁿ)
    let d2_min = (1.0 / (nf * total as f64)).ln() / nf;
    let mut value = 0.0;
    let mut d2 = 0.0;
    for k in 0..total {
        value += alpha[k] * (u[k] + nf * delta[k]);
        if alpha[k] > 0.0 {
            d2 += alpha[k] * alpha[k].ln();
        }
    }
    value -= mu * (d2 - d2_min);
    let max_value = (0..total).map(|k| delta[k] + u[k] / nf).fold(f64::NEG_INFINITY, f64::max);
    F1Brute { log_z, p_plus, p_minus, p_flip, value, max_value }
}

/// `Σ_{y′} α*(y′)·Σᵢ(y′ᵢ − yᵢ)xᵢ` by enumeration; `x` holds one example per row.
pub fn brute_force_f1_gradient(w: &[f64], x: &[Vec<f64>], labels: &[i8], mu: f64) -> Vec<f64> {
    let scores: Vec<f64> = x.iter().map(|r| r.iter().zip(w).map(|(a, b)| a * b).sum()).collect();
    let n = x.len();
    let nf = n as f64;
    let n_plus = labels.iter().filter(|&&y| y == 1).count();
    let total = 1usize << n;
    let mut expo = Vec::with_capacity(total);
    for mask in 0..total {
        let (mut b, mut c, mut sy) = (0, 0, 0.0);
        for i in 0..n {
            let yp = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
            b += usize::from(labels[i] == 1 && yp < 0.0);
            c += usize::from(labels[i] == -1 && yp > 0.0);
            sy += yp * scores[i];
        }
        expo.push(sy / mu + nf / mu * f1(b, c, n_plus));
    }
    let log_z = lse(&expo);
    let mut g = vec![0.0; w.len()];
    for (mask, e) in expo.iter().enumerate() {
        let a = (e - log_z).exp() / nf;
        for i in 0..n {
            let yp = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
            let coef = a * (yp - labels[i] as f64);
            for (gj, xj) in g.iter_mut().zip(&x[i]) {
                *gj += coef * xj;
            }
        }
    }
    g
}
