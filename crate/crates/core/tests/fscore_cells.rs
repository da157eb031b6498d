// Own binary: the cell counter is process-global.
use agm_core::fscore::{cells_touched, f1_marginals, F1Instance};
use ndarray::Array1;

#[test]
fn dp_work_is_quadratic() {
    let mut per_n2 = Vec::new();
    for n in [100usize, 200, 400, 800] {
        let y: Vec<i8> = (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        let s = Array1::from_iter((0..n).map(|i| (i as f64 * 0.37).sin()));
        let inst = F1Instance::new(s, &y, 0.5).unwrap();
        let before = cells_touched();
        let _ = f1_marginals(&inst);
        let cells = cells_touched() - before;
        per_n2.push(cells as f64 / (n * n) as f64);
    }
    let (lo, hi) = per_n2.iter().fold((f64::MAX, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(hi <= 4.0 && hi / lo < 1.2, "cells/n² = {per_n2:?}");
}
