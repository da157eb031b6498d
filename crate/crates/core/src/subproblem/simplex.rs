//! Entropy prox on the capped simplex `{w ∈ [0, ν]ⁿ : Σwᵢ = total}`.

use ndarray::{Array1, ArrayView1};

use crate::error::{AgmError, Result};
use crate::scalar::{log_sum_exp, Scalar};

/// `argmin_w ⟨u, w⟩ + Δ(w, center)` over the capped simplex, with entropy `Δ`.
pub fn capped_simplex_entropy_prox<T: Scalar>(
    u: ArrayView1<T>,
    center: ArrayView1<T>,
    cap: T,
    total: T,
) -> Result<Array1<T>> {
    if u.len() != center.len() {
        return Err(AgmError::Input("u and center differ in length".into()));
    }
    if center.iter().any(|&c| !(c > T::zero()) || !c.is_finite()) {
        return Err(AgmError::Domain("center must be strictly positive".into()));
    }
    let logits: Array1<T> = center.iter().zip(u.iter()).map(|(&c, &ui)| c.ln() - ui).collect();
    capped_simplex_gibbs(logits.view(), cap, total)
}

/// `wᵢ = min(ν, exp(ℓᵢ + τ))` with `τ` chosen so that `Σwᵢ = total`.
///
/// The capped set is a prefix of the coordinates sorted by logit, so `τ` is found
/// exactly by scanning prefixes. Works on logits directly, so huge `ℓ` is fine.
pub fn capped_simplex_gibbs<T: Scalar>(logits: ArrayView1<T>, cap: T, total: T) -> Result<Array1<T>> {
    let n = logits.len();
    if n == 0 {
        return Err(AgmError::Input("empty simplex".into()));
    }
    if logits.iter().any(|l| l.is_nan() || *l == T::infinity()) {
        return Err(AgmError::Input("logits must be finite or -inf".into()));
    }
    if !(total > T::zero()) || !(cap > T::zero()) {
        return Err(AgmError::Input("cap and total must be positive".into()));
    }
    let nn = T::from_usize_lossy(n);
    if cap.is_finite() && cap * nn < total * (T::one() - T::lit(1e-12)) {
        return Err(AgmError::Infeasible(format!("cap {cap} times n = {n} is below total {total}")));
    }
    if cap.is_finite() && cap * nn <= total {
        return Ok(Array1::from_elem(n, total / nn));
    }

    let top = logits.iter().copied().fold(T::neg_infinity(), T::max);
    let logits = if top.is_finite() { logits.mapv(|l| l - top) } else { logits.to_owned() };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| logits[b].partial_cmp(&logits[a]).unwrap());
    // suffix[k] = ln Σ_{j ≥ k} exp(ℓ_(j))
    let mut suffix = vec![T::neg_infinity(); n + 1];
    for k in (0..n).rev() {
        suffix[k] = crate::scalar::log_add_exp(suffix[k + 1], logits[order[k]]);
    }
    let ln_cap = cap.ln();
    let mut w = Array1::zeros(n);
    for k in 0..n {
        let rest = total - T::from_usize_lossy(k) * cap;
        if !(rest > T::zero()) || suffix[k] == T::neg_infinity() {
            break;
        }
        let tau = rest.ln() - suffix[k];
        let top_uncapped = logits[order[k]] + tau;
        let capped_ok = k == 0 || logits[order[k - 1]] + tau >= ln_cap;
        if top_uncapped <= ln_cap && capped_ok {
            for (j, &i) in order.iter().enumerate() {
                w[i] = if j < k { cap } else { (logits[i] + tau).exp() };
            }
            return Ok(w);
        }
    }
    // Degenerate mass distribution (e.g. -inf logits): fill caps greedily in logit order.
    let mut left = total;
    for &i in &order {
        let take = cap.min(left);
        w[i] = take;
        left -= take;
    }
    Ok(w)
}

/// Soft-max weights `exp(ℓᵢ − LSE(ℓ))·total`, i.e. the uncapped case.
pub fn gibbs<T: Scalar>(logits: ArrayView1<T>, total: T) -> Array1<T> {
    let lse = log_sum_exp(logits.iter().copied());
    logits.mapv(|l| (l - lse).exp() * total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    #[test]
    fn zero_linear_term_keeps_uniform() {
        let w = capped_simplex_entropy_prox(
            array![0.0, 0.0, 0.0].view(),
            array![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0].view(),
            1.0,
            1.0,
        )
        .unwrap();
        for x in w.iter() {
            assert_abs_diff_eq!(*x, 1.0 / 3.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn two_point_gibbs_weights() {
        let w = capped_simplex_entropy_prox(
            array![0.0, 3.0f64.ln()].view(),
            array![0.5, 0.5].view(),
            1.0,
            1.0,
        )
        .unwrap();
        assert_abs_diff_eq!(w[0], 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(w[1], 0.25, epsilon = 1e-15);
    }

    #[test]
    fn cap_binds() {
        let c = array![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];
        let w = capped_simplex_entropy_prox(array![-5.0, 0.0, 1.0].view(), c.view(), 0.5, 1.0).unwrap();
        assert_abs_diff_eq!(w[0], 0.5, epsilon = 1e-15);
        let e = (-1.0f64).exp();
        assert_abs_diff_eq!(w[1], 0.5 / (1.0 + e), epsilon = 1e-14);
        assert_abs_diff_eq!(w[2], 0.5 * e / (1.0 + e), epsilon = 1e-14);
        let w = capped_simplex_entropy_prox(array![-5.0, 0.0, 1.0].view(), c.view(), 0.4, 1.0).unwrap();
        assert_abs_diff_eq!(w[0], 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(w[1], 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(w[2], 0.2, epsilon = 1e-14);
    }

    #[test]
    fn huge_logits_do_not_overflow() {
        let w = capped_simplex_gibbs(array![1e6, 1e6 - 1.0, -1e6].view(), 1.0, 1.0).unwrap();
        assert!(w.iter().all(|x: &f64| x.is_finite()));
        assert_abs_diff_eq!(w.sum(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn infeasible_cap() {
        let r = capped_simplex_gibbs(array![0.0, 0.0].view(), 0.4, 1.0);
        assert!(matches!(r, Err(AgmError::Infeasible(_))));
    }
}
