mod common;

use agm_core::rrm::{
    build_elastic_net_ls, build_f1_svm, build_lpboost, build_svm_dual_smoothed, build_svm_dual_unsmoothed,
    build_svm_primal_smoothed, estimate_operator_norm, generate, parse_libsvm, parse_model, solve, write_libsvm,
    write_model, Dataset, DenseOperator, LinearOperator, SynthSpec,
};
use agm_core::{CompositeProblem, DualOracle, Memory, SolverConfig};
use agm_oracles::{
    finite_difference_grad, grid_minimize_capped_simplex, ridge_solve, svm_subgradient_reference, sym_eigen_max,
};
use ndarray::{Array1, Array2};
use proptest::prelude::*;

fn svm_reference(d: &Dataset<f64>, lambda: f64, iters: usize) -> f64 {
    let rows = common::rows(&d.x);
    svm_subgradient_reference(&rows, d.y.as_slice().unwrap(), lambda, iters, 1.0).value
}

#[test]
fn svm_schemes_agree() {
    let d: Dataset<f64> = generate(&SynthSpec::noisy(80, 5, 0.1, 3)).unwrap();
    let (lambda, eps) = (0.05, 0.02);
    let j_ref = svm_reference(&d, lambda, 200_000);

    let primal = build_svm_primal_smoothed(&d, lambda, eps).unwrap();
    let dual = build_svm_dual_smoothed(&d, lambda, eps).unwrap();
    let plain = build_svm_dual_unsmoothed(&d, lambda).unwrap();
    for memory in [Memory::Infinite, Memory::One] {
        let cfg = SolverConfig::adaptive(3000);
        let r = solve(&primal, Array1::zeros(d.p()).view(), &cfg, Some(&primal), memory).unwrap();
        let j = primal.data.objective(r.x.view());
        assert!(j <= j_ref + 3.0 * eps, "primal {memory:?}: {j} vs {j_ref}");
        // weak duality of the smoothed pair, every iteration
        for g in r.trace.rows.iter().filter_map(|row| row.gap) {
            assert!(g >= -1e-10, "negative gap {g}");
        }

        for p in [&dual, &plain] {
            let r = solve(p, Array1::zeros(d.n()).view(), &cfg, Some(p), memory).unwrap();
            let w = p.data.primal_of(r.x.view());
            let j = p.data.objective(w.view());
            assert!(j <= j_ref + 3.0 * eps, "dual mu={} {memory:?}: {j} vs {j_ref}", p.mu);
            for g in r.trace.rows.iter().filter_map(|row| row.gap) {
                assert!(g >= -1e-10, "negative gap {g}");
            }
        }
    }
}

#[test]
fn svm_dual_bound_holds_at_reference() {
    let d: Dataset<f64> = generate(&SynthSpec::noisy(50, 4, 0.2, 9)).unwrap();
    let lambda = 0.1;
    let j_ref = svm_reference(&d, lambda, 100_000);
    let plain = build_svm_dual_unsmoothed(&d, lambda).unwrap();
    let r = solve(&plain, Array1::zeros(d.n()).view(), &SolverConfig::adaptive(2000), Some(&plain), Memory::Infinite)
        .unwrap();
    // D(α) ≤ J* for any feasible α
    let dv = plain.data.dual_value(r.x.view(), 0.0);
    assert!(dv <= j_ref + 1e-9, "{dv} > {j_ref}");
    assert!(j_ref - dv < 1e-3);
}

#[test]
fn elastic_net_without_l1_is_ridge() {
    let d: Dataset<f64> = generate(&SynthSpec::regression(60, 6, 0.1, 5)).unwrap();
    let lambda = 0.05;
    let p = build_elastic_net_ls(&d, lambda, 0.0).unwrap();
    let r = solve(&p, Array1::zeros(6).view(), &SolverConfig::adaptive(5000), None, Memory::Infinite).unwrap();
    let w = ridge_solve(&common::rows(&d.x), d.y.as_slice().unwrap(), lambda);
    for j in 0..6 {
        assert!((r.x[j] - w[j]).abs() < 1e-6, "coord {j}: {} vs {}", r.x[j], w[j]);
    }
}

#[test]
fn elastic_net_reaches_optimality() {
    let d: Dataset<f64> = generate(&SynthSpec::regression(40, 10, 0.3, 6)).unwrap();
    let p = build_elastic_net_ls(&d, 0.1, 0.5).unwrap();
    for memory in [Memory::Infinite, Memory::One] {
        let r = solve(&p, Array1::zeros(10).view(), &SolverConfig::adaptive(5000), None, memory).unwrap();
        let v = p.optimality_violation(r.x.view()).unwrap();
        assert!(v < 1e-6, "{memory:?}: violation {v}");
        assert!(r.x.iter().any(|&w| w == 0.0), "expected some exact zeros: {:?}", r.x);
    }
}

#[test]
fn lpboost_matches_grid() {
    let edges = Array2::from_shape_vec((3, 4), vec![0.3, -0.5, 0.8, 0.1, -0.2, 0.6, -0.4, 0.5, 0.7, 0.2, -0.3, -0.6])
        .unwrap();
    let (lambda, nu) = (0.2, 0.45);
    let p = build_lpboost(edges, lambda, nu, 1e-5).unwrap();
    let r = solve(&p, p.w0.view(), &SolverConfig::adaptive(50_000), None, Memory::Infinite).unwrap();
    let ours = p.exact_objective(r.x.view());
    let oracle = grid_minimize_capped_simplex(|w| p.exact_objective(Array1::from(w.to_vec()).view()), 4, nu, 40, 40);
    assert!((ours - oracle.value).abs() <= 1e-4, "{ours} vs {}", oracle.value);
}

#[test]
fn f1_svm_gradient_and_descent() {
    let d: Dataset<f64> = generate(&SynthSpec::noisy(12, 3, 0.1, 8)).unwrap();
    let p = build_f1_svm(&d, 0.1, 0.05).unwrap();
    let w = Array1::from(vec![0.3, -0.2, 0.5]);
    let (_, g) = p.smooth(w.view()).unwrap();
    let fd = finite_difference_grad(|v| p.smooth(Array1::from(v.to_vec()).view()).unwrap().0, w.as_slice().unwrap(), 1e-6);
    for j in 0..3 {
        assert!((g[j] - fd[j]).abs() <= 1e-4 * g[j].abs().max(1e-3), "{j}: {} vs {}", g[j], fd[j]);
    }
    let r = solve(&p, Array1::zeros(3).view(), &SolverConfig::adaptive(2000), None, Memory::Infinite).unwrap();
    let zero = Array1::zeros(3);
    assert!(p.smooth(r.x.view()).unwrap().0 + p.regularizer(r.x.view()) <= p.smooth(zero.view()).unwrap().0);
    assert!(p.exact_objective(r.x.view()).unwrap() <= p.exact_objective(zero.view()).unwrap() + 0.05);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn operator_norm_matches_dense(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let a = common::normal_matrix(&mut r, 50, 20);
        let est: f64 = estimate_operator_norm(&DenseOperator { a: a.clone() }, 100_000).unwrap();
        let (l, _) = sym_eigen_max(&common::rows(&a.t().dot(&a)));
        prop_assert!((est - l.sqrt()).abs() <= 1e-6 * l.sqrt(), "{} vs {}", est, l.sqrt());
    }

    #[test]
    fn adjoint_identity(seed in any::<u64>(), n in 1usize..30, p in 1usize..30) {
        let mut r = common::rng(seed);
        let op = DenseOperator { a: common::normal_matrix(&mut r, n, p) };
        let w = common::normal_vector(&mut r, p);
        let al = common::normal_vector(&mut r, n);
        let lhs = op.apply(w.view()).dot(&al);
        let rhs = w.dot(&op.apply_adjoint(al.view()));
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn libsvm_round_trip(seed in any::<u64>(), n in 2usize..30, p in 1usize..8) {
        let d: Dataset<f64> = generate(&SynthSpec::noisy(n, p, 0.1, seed)).unwrap();
        let mut buf = Vec::new();
        write_libsvm(&d, &mut buf).unwrap();
        let back: Dataset<f64> = parse_libsvm(std::str::from_utf8(&buf).unwrap(), Some(p)).unwrap();
        prop_assert_eq!(back.x, d.x);
        prop_assert_eq!(back.y, d.y);
    }

    #[test]
    fn svm_objective_sandwich(seed in any::<u64>()) {
        // J − μ/(2n) ≤ J_μ ≤ J: D = max ½‖α‖² = 1/(2n) on the box
        let d: Dataset<f64> = generate(&SynthSpec::noisy(30, 4, 0.2, seed)).unwrap();
        let p = build_svm_primal_smoothed(&d, 0.1, 0.05).unwrap();
        let mut r = common::rng(seed);
        let w = common::normal_vector(&mut r, 4);
        let j = p.data.objective(w.view());
        let jm = p.data.smoothed_objective(w.view(), p.mu).unwrap();
        prop_assert!(jm <= j + 1e-12);
        prop_assert!(jm >= j - p.mu / (2.0 * 30.0) - 1e-12);
        // and the dual lower bound
        let alpha = p.dual_point(w.view()).unwrap();
        prop_assert!(p.dual_objective(alpha.view()).unwrap() <= jm + 1e-12);
    }
}

#[test]
fn model_round_trip() {
    let w = Array1::from(vec![0.25, -1.5, 3.0]);
    let mut buf = Vec::new();
    write_model(w.view(), 0.01, -0.3, &mut buf).unwrap();
    let (back, lambda, b): (Array1<f64>, f64, f64) = parse_model(std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(back, w);
    assert_eq!((lambda, b), (0.01, -0.3));
}

#[test]
fn libsvm_errors_name_the_line() {
    let err = parse_libsvm::<f64>("+1 1:0.5\n-1 2:x\n", None).unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
    let err = parse_libsvm::<f64>("+1 2:0.5 1:0.1\n", None).unwrap_err();
    assert!(err.to_string().contains("line 1"), "{err}");
}
