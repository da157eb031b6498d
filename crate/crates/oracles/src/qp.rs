/// Solves `min ½Σdᵢ²(αᵢ − mᵢ)²` over `l ≤ α ≤ u, Σσᵢαᵢ = z` by trying every
/// `{at l, free, at u}` pattern and keeping the one that satisfies KKT. `n ≤ 8`.
///
/// Returns `None` when the problem is infeasible.
pub fn kkt_enumerate_qp(d: &[f64], m: &[f64], l: &[f64], u: &[f64], sigma: &[f64], z: f64) -> Option<Vec<f64>> {
    let n = d.len();
    assert!(n <= 8, "enumeration oracle is limited to n <= 8");
    let scale = 1.0 + z.abs() + (0..n).map(|i| sigma[i].abs() * (l[i].abs() + u[i].abs() + m[i].abs())).sum::<f64>();
    let tol = 1e-10 * scale;
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut pattern = vec![0u8; n];
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        for p in pattern.iter_mut() {
            *p = (c % 3) as u8;
            c /= 3;
        }
        // fixed part and free curvature
        let (mut fixed, mut free_m, mut free_w) = (0.0, 0.0, 0.0);
        for i in 0..n {
            match pattern[i] {
                0 => fixed += sigma[i] * l[i],
                2 => fixed += sigma[i] * u[i],
                _ => {
                    free_m += sigma[i] * m[i];
                    free_w += sigma[i] * sigma[i] / (d[i] * d[i]);
                }
            }
        }
        // multiplier interval allowed by the pattern
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        if free_w > 0.0 {
            let lam = (z - fixed - free_m) / free_w;
            lo = lam;
            hi = lam;
        } else if (fixed + free_m - z).abs() > tol {
            continue;
        }
        let mut ok = true;
        for i in 0..n {
            let s = sigma[i] / (d[i] * d[i]);
            // at l needs m + λs ≤ l, at u needs m + λs ≥ u, free needs l ≤ m + λs ≤ u
            let (need_le, need_ge) = match pattern[i] {
                0 => (Some(l[i]), None),
                2 => (None, Some(u[i])),
                _ => (Some(u[i]), Some(l[i])),
            };
            for (bound, upper) in [(need_le, true), (need_ge, false)] {
                let Some(b) = bound else { continue };
                // constraint m + λs ≤ b (upper) or ≥ b
                let r = b - m[i];
                if s == 0.0 {
                    if (upper && r < -tol) || (!upper && r > tol) {
                        ok = false;
                    }
                } else {
                    let t = r / s;
                    if upper == (s > 0.0) {
                        hi = hi.min(t + tol / s.abs());
                    } else {
                        lo = lo.max(t - tol / s.abs());
                    }
                }
            }
        }
        if !ok || lo > hi {
            continue;
        }
        let lam = if lo.is_finite() && hi.is_finite() {
            0.5 * (lo + hi)
        } else if lo.is_finite() {
            lo
        } else if hi.is_finite() {
            hi
        } else {
            0.0
        };
        let alpha: Vec<f64> = (0..n)
            .map(|i| match pattern[i] {
                0 => l[i],
                2 => u[i],
                _ => m[i] + lam * sigma[i] / (d[i] * d[i]),
            })
            .collect();
        let obj: f64 = (0..n).map(|i| 0.5 * d[i] * d[i] * (alpha[i] - m[i]).powi(2)).sum();
        if best.as_ref().is_none_or(|(b, _)| obj < *b) {
            best = Some((obj, alpha));
        }
    }
    best.map(|(_, a)| a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_projection() {
        let a = kkt_enumerate_qp(&[1.0, 1.0], &[0.8, 0.4], &[0.0, 0.0], &[1.0, 1.0], &[1.0, 1.0], 1.0).unwrap();
        assert!((a[0] - 0.7).abs() < 1e-12 && (a[1] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn forced_single() {
        let a = kkt_enumerate_qp(&[2.0], &[5.0], &[0.0], &[1.0], &[2.0], 1.0).unwrap();
        assert!((a[0] - 0.5).abs() < 1e-12);
        assert!(kkt_enumerate_qp(&[1.0], &[0.0], &[0.0], &[1.0], &[1.0], 2.0).is_none());
    }
}
