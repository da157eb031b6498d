mod common;

use agm_core::smoothing::{gram, optimize_prox_weights, power_iteration, smoothed_hinge, soft_max};
use agm_oracles::sym_eigen_max;
use ndarray::Array1;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hinge_sandwich(mu in 1e-3f64..5.0) {
        for k in 0..1000 {
            let w = -3.0 + 6.0 * k as f64 / 999.0;
            let hard = (1.0 - w).max(0.0);
            let (soft, _) = smoothed_hinge(w, mu).unwrap();
            prop_assert!(soft - (hard - 0.5 * mu) >= -1e-12);
            prop_assert!(hard - soft >= -1e-12);
        }
    }

    #[test]
    fn hinge_derivative_lipschitz(mu in 1e-3f64..5.0, seed in any::<u64>()) {
        let mut r = common::rng(seed);
        for _ in 0..200 {
            let (a, b) = (r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
            if a == b {
                continue;
            }
            let (_, ga) = smoothed_hinge(a, mu).unwrap();
            let (_, gb) = smoothed_hinge(b, mu).unwrap();
            prop_assert!((ga - gb).abs() / (a - b).abs() <= (1.0 / mu) * (1.0 + 1e-8));
        }
    }

    #[test]
    fn soft_max_sandwich_and_lipschitz(seed in any::<u64>(), t in 1usize..12, mu in 1e-3f64..3.0) {
        let mut r = common::rng(seed);
        let d = (t as f64).ln();
        let mut pts = Vec::new();
        for _ in 0..1000 {
            let s = common::normal_vector(&mut r, t) * 3.0;
            let hard = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let (v, g) = soft_max(s.view(), mu).unwrap();
            let centered = v - mu * d;
            prop_assert!(centered - (hard - mu * d) >= -1e-12);
            prop_assert!(hard - centered >= -1e-12);
            pts.push((s, g));
        }
        // ∇ is 1/μ-Lipschitz from ‖·‖∞ to ‖·‖₁
        for w in pts.windows(2) {
            let dx = (&w[0].0 - &w[1].0).iter().map(|v| v.abs()).fold(0.0, f64::max);
            let dg: f64 = (&w[0].1 - &w[1].1).iter().map(|v| v.abs()).sum();
            prop_assert!(dg / dx <= (1.0 / mu) * (1.0 + 1e-8));
        }
    }

    #[test]
    fn power_iteration_matches_dense(seed in any::<u64>(), n in 2usize..40, p in 1usize..15) {
        let mut r = common::rng(seed);
        let a = common::normal_matrix(&mut r, n, p);
        let m = gram(a.view());
        let scale = m.iter().map(|v| v * v).sum::<f64>().sqrt();
        let pr = power_iteration(p, |v| m.dot(&v), 100_000, 1e-12, scale).unwrap();
        let (lmax, _) = sym_eigen_max(&common::rows(&m));
        prop_assert!((pr.value - lmax).abs() <= 1e-6 * lmax, "{} vs {}", pr.value, lmax);
        for w in pr.rayleigh.windows(2) {
            prop_assert!(w[1] >= w[0] * (1.0 - 1e-12));
        }
    }

    #[test]
    fn prox_weights_use_dominant_direction(seed in any::<u64>(), n in 2usize..30, p in 1usize..8) {
        let mut r = common::rng(seed);
        let a = common::normal_matrix(&mut r, n, p);
        let w = optimize_prox_weights(a.view(), 100_000).unwrap();
        let (lmax, _) = sym_eigen_max(&common::rows(&gram(a.view())));
        prop_assert!((w.lmax - lmax).abs() <= 1e-6 * lmax);
        let expect: Array1<f64> = a.dot(&w.v_star).mapv(f64::abs);
        let floor = 1e-12 * expect.iter().copied().fold(0.0, f64::max);
        for i in 0..n {
            prop_assert!((w.b_sq[i] - expect[i].max(floor)).abs() <= 1e-12 * expect[i].max(1.0));
        }
    }
}
