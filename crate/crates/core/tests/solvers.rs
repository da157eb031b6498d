mod common;

use agm_core::solvers::{rate_factor_inf, rate_factor_one};
use agm_core::{run_agm_inf, run_agm_one, AgmInf, AgmOne, CompositeProblem, LMode, SolveStatus, SolverConfig};
use common::{le_rel, QuadBox, QuadSimplex};
use ndarray::Array1;
use proptest::prelude::*;

fn check_inf<P: CompositeProblem<f64>>(p: &P, x0: &Array1<f64>, cfg: SolverConfig<f64>, iters: usize) {
    let mut s = AgmInf::new(p, x0.view(), cfg, None).unwrap();
    for _ in 0..iters {
        if s.saturated() {
            break;
        }
        s.step().unwrap();
        let lhs = s.a_sum() * s.objective_at_x();
        let rhs = s.psi_at_z();
        assert!(le_rel(lhs, rhs, 1e-9), "k={} A_k J = {lhs} > psi = {rhs}", s.iteration());
    }
}

fn check_one<P: CompositeProblem<f64>>(p: &P, u0: &Array1<f64>, cfg: SolverConfig<f64>, iters: usize) {
    let mut s = AgmOne::new(p, u0.view(), cfg, None).unwrap();
    assert!(le_rel(s.objective_at_x(), s.q_at_z(), 1e-9));
    for _ in 0..iters {
        s.step().unwrap();
        assert!(
            le_rel(s.objective_at_x(), s.q_at_z(), 1e-9),
            "k={} J = {} > q = {}",
            s.iteration(),
            s.objective_at_x(),
            s.q_at_z()
        );
    }
}

#[test]
fn euclidean_invariants_fixed_l() {
    for seed in 0..5 {
        let p = QuadBox::random(seed, 8, 0.05 * (seed % 2) as f64, 0.1 * (seed % 3) as f64, Some((-1.0, 1.0)));
        let x0 = Array1::zeros(8);
        check_inf(&p, &x0, SolverConfig::fixed(p.l, 100), 100);
        check_one(&p, &x0, SolverConfig::fixed(p.l, 100), 100);
    }
}

#[test]
fn entropy_invariants_fixed_l() {
    for seed in 0..5 {
        let p = QuadSimplex::random(seed, 6, 0.05 * (seed % 3) as f64);
        let x0 = Array1::from_elem(6, 1.0 / 6.0);
        check_inf(&p, &x0, SolverConfig::fixed(p.l, 100), 100);
        check_one(&p, &x0, SolverConfig::fixed(p.l, 100), 100);
    }
}

#[test]
fn adaptive_invariants_and_bounded_l() {
    for seed in 0..5 {
        let p = QuadBox::random(10 + seed, 8, 0.0, 0.1, Some((-1.0, 1.0)));
        let x0 = Array1::zeros(8);
        let cfg = SolverConfig {
            l_mode: LMode::Adaptive { initial: p.l / 64.0, gamma_d: 2.0, gamma_u: 2.0 },
            ..SolverConfig::adaptive(100)
        };
        check_inf(&p, &x0, cfg.clone(), 100);
        check_one(&p, &x0, cfg.clone(), 100);
        let r = run_agm_inf(&p, x0.view(), &cfg, None).unwrap();
        for row in &r.trace.rows[1..] {
            assert!(row.l_k < 2.0 * p.l, "accepted L {} vs true {}", row.l_k, p.l);
        }
    }
}

#[test]
fn quadratic_rates() {
    for seed in 0..3 {
        let (lam1, lam2) = [(0.0, 0.0), (0.1, 0.0), (0.0, 0.2)][seed as usize];
        let p = QuadBox::random(20 + seed, 6, lam1, lam2, None);
        let xs = p.unconstrained_opt();
        let js = p.objective(xs.view()).unwrap();
        let x0 = Array1::zeros(6);
        let d0 = 0.5 * xs.dot(&xs);
        let r = run_agm_inf(&p, x0.view(), &SolverConfig::fixed(p.l, 200), None).unwrap();
        for row in &r.trace.rows[1..] {
            let bound = d0 * rate_factor_inf(row.k, p.l, 1.0, lam1, lam2);
            assert!(row.objective - js <= bound + 1e-12 * js.abs().max(1.0), "k={}", row.k);
        }
        let s = AgmOne::new(&p, x0.view(), SolverConfig::fixed(p.l, 1), None).unwrap();
        let gap0 = s.q_at(xs.view()) - js;
        let r = run_agm_one(&p, x0.view(), &SolverConfig::fixed(p.l, 200), None).unwrap();
        for row in &r.trace.rows[1..] {
            let lp = p.l + lam2;
            let env = (1.0 - ((lam1 + lam2) / lp).sqrt()).powi(row.k as i32).min(4.0 / (2.0 + row.k as f64).powi(2));
            assert!(row.objective - js <= gap0 * env + 1e-12 * js.abs().max(1.0), "k={}", row.k);
            assert!(gap0 * env <= d0 * rate_factor_one(row.k, p.l, 1.0, lam1, lam2) * (1.0 + 1e-12));
        }
    }
}

#[test]
fn stall_detection_without_dual() {
    let p = QuadBox::random(3, 4, 0.5, 0.5, None);
    let r = run_agm_inf(&p, Array1::zeros(4).view(), &SolverConfig::fixed(p.l, 10_000), None).unwrap();
    assert_eq!(r.status, SolveStatus::Stalled);
    let xs = p.unconstrained_opt();
    assert!((&r.x - &xs).iter().all(|v| v.abs() < 1e-5));
}

#[test]
fn degenerate_l_solves_in_one_step() {
    // f = ½‖x − b‖²·λ₁ with H = λ₁I is exactly its own model at L = λ₁
    let mut p = QuadBox::random(4, 3, 0.0, 0.0, None);
    p.h = ndarray::Array2::eye(3) * 2.0;
    p.lam1 = 2.0;
    p.l = 2.0;
    let cfg = SolverConfig { allow_one_step: true, ..SolverConfig::fixed(2.0, 10) };
    let r = run_agm_inf(&p, Array1::zeros(3).view(), &cfg, None).unwrap();
    assert_eq!(r.status, SolveStatus::OneStep);
    for i in 0..3 {
        assert!((r.x[i] - p.b[i] / 2.0).abs() < 1e-14);
    }
}

#[test]
fn rejects_bad_config() {
    let p = QuadBox::random(5, 3, 1.0, 0.0, None);
    let x0 = Array1::zeros(3);
    assert!(run_agm_inf(&p, x0.view(), &SolverConfig::fixed(0.5, 10), None).is_err());
    assert!(run_agm_inf(&p, x0.view(), &SolverConfig::fixed(-1.0, 10), None).is_err());
    assert!(run_agm_inf(&p, Array1::zeros(4).view(), &SolverConfig::fixed(p.l, 10), None).is_err());
    let bad = SolverConfig {
        l_mode: LMode::Adaptive { initial: 1.0, gamma_d: 0.5, gamma_u: 2.0 },
        ..SolverConfig::adaptive(10)
    };
    assert!(run_agm_one(&p, x0.view(), &bad, None).is_err());
}

#[test]
fn f32_runs() {
    let p = QuadBox::random(6, 4, 0.0, 0.5, Some((-1.0, 1.0)));
    let r64 = run_agm_inf(&p, Array1::zeros(4).view(), &SolverConfig::fixed(p.l, 300), None).unwrap();
    let pf = F32Quad(p);
    let r32 = run_agm_inf(&pf, Array1::<f32>::zeros(4).view(), &SolverConfig::fixed(pf.0.l as f32, 300), None).unwrap();
    assert!((r32.objective as f64 - r64.objective).abs() < 1e-4 * r64.objective.abs().max(1.0));
}

struct F32Quad(QuadBox);

impl CompositeProblem<f32> for F32Quad {
    fn dim(&self) -> usize {
        self.0.b.len()
    }
    fn geometry(&self) -> agm_core::BregmanGeometry {
        agm_core::BregmanGeometry::Euclidean
    }
    fn smooth(&self, x: ndarray::ArrayView1<f32>) -> agm_core::Result<(f32, Array1<f32>)> {
        let (f, g) = self.0.smooth(x.mapv(f64::from).view())?;
        Ok((f as f32, g.mapv(|v| v as f32)))
    }
    fn regularizer(&self, x: ndarray::ArrayView1<f32>) -> f32 {
        self.0.regularizer(x.mapv(f64::from).view()) as f32
    }
    fn prox(&self, theta: ndarray::ArrayView1<f32>, beta: f32, tau: f32) -> agm_core::Result<agm_core::ProxPoint<f32>> {
        let p = self.0.prox(theta.mapv(f64::from).view(), beta as f64, tau as f64)?;
        Ok(agm_core::ProxPoint::plain(p.x.mapv(|v| v as f32)))
    }
    fn lambda2(&self) -> f32 {
        self.0.lam2 as f32
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn invariants_hold_for_random_quadratics(seed in 0u64..1_000_000, lam2 in 0.0f64..0.5, one in any::<bool>()) {
        let p = QuadBox::random(seed, 5, 0.0, lam2, Some((-0.5, 2.0)));
        let x0 = Array1::zeros(5);
        if one {
            check_one(&p, &x0, SolverConfig::adaptive(40), 40);
        } else {
            check_inf(&p, &x0, SolverConfig::adaptive(40), 40);
        }
    }
}
