//! Diagonal QP over a box intersected with one hyperplane:
//!
//! `min ½ Σ dᵢ²(αᵢ − mᵢ)²  s.t.  lᵢ ≤ αᵢ ≤ uᵢ,  Σ σᵢαᵢ = z`
//!
//! Solved in linear time by median halving over the kinks of the
//! monotone multiplier equation.

use std::cmp::Ordering;

use ndarray::Array1;

use crate::error::{AgmError, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct BoxHyperplaneQp<T> {
    /// Diagonal weights `dᵢ` (the objective uses `dᵢ²`).
    pub d: Array1<T>,
    pub m: Array1<T>,
    pub l: Array1<T>,
    pub u: Array1<T>,
    pub sigma: Array1<T>,
    pub z: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QpSolution<T> {
    pub alpha: Array1<T>,
    /// Hyperplane multiplier `λ*` with `αᵢ = clip(mᵢ + λ*σᵢ/dᵢ², lᵢ, uᵢ)`.
    pub multiplier: T,
    /// Number of halving rounds.
    pub rounds: usize,
}

/// How the kink multiset is halved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KinkRule {
    /// Duplicates kept, strict-inequality halving with bracket exits.
    Duplicates,
    /// Duplicates removed up front, non-strict halving.
    Distinct,
}

impl<T: Scalar> BoxHyperplaneQp<T> {
    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn objective(&self, alpha: &Array1<T>) -> T {
        let mut s = T::zero();
        for i in 0..self.len() {
            let r = alpha[i] - self.m[i];
            s += self.d[i] * self.d[i] * r * r;
        }
        T::lit(0.5) * s
    }

    fn validate(&self) -> Result<()> {
        let n = self.d.len();
        if [self.m.len(), self.l.len(), self.u.len(), self.sigma.len()].iter().any(|&k| k != n) {
            return Err(AgmError::Input("QP vectors have different lengths".into()));
        }
        if !self.z.is_finite() {
            return Err(AgmError::Input("hyperplane level z is not finite".into()));
        }
        for i in 0..n {
            let vals = [self.d[i], self.m[i], self.l[i], self.u[i], self.sigma[i]];
            if vals.iter().any(|v| !v.is_finite()) {
                return Err(AgmError::Input(format!("coordinate {i} has a non-finite entry")));
            }
            if !(self.d[i] > T::zero()) {
                return Err(AgmError::Input(format!("d[{i}] must be positive")));
            }
            if self.l[i] > self.u[i] {
                return Err(AgmError::Input(format!("l[{i}] > u[{i}]")));
            }
        }
        Ok(())
    }
}

fn clip<T: Scalar>(x: T, lo: T, hi: T) -> T {
    x.max(lo).min(hi)
}

/// Transformed coordinate: `hᵢ(λ) = clip(λ/d̄ᵢ², l′ᵢ, u′ᵢ)`.
#[derive(Clone, Copy)]
struct Coord<T> {
    dbar2: T,
    lo: T,
    hi: T,
}

impl<T: Scalar> Coord<T> {
    #[inline]
    fn h(&self, lambda: T) -> T {
        clip(lambda / self.dbar2, self.lo, self.hi)
    }
}

struct KinkSearch<T> {
    coords: Vec<Coord<T>>,
    c_g: T,
    s_g: T,
    undetermined: Vec<usize>,
    zp: T,
}

impl<T: Scalar> KinkSearch<T> {
    fn f(&self, lambda: T) -> T {
        let mut s = self.c_g + self.s_g * lambda - self.zp;
        for &i in &self.undetermined {
            s += self.coords[i].h(lambda);
        }
        s
    }

    /// Moves coordinates that are affine on `[min S, max S]` into the aggregate buffers.
    fn resolve(&mut self, kinks: &[(T, usize)]) {
        if kinks.is_empty() {
            return;
        }
        let lo = kinks.iter().map(|p| p.0).fold(T::infinity(), T::min);
        let hi = kinks.iter().map(|p| p.0).fold(T::neg_infinity(), T::max);
        let mut kept = Vec::with_capacity(self.undetermined.len().min(kinks.len()));
        for &i in &self.undetermined {
            let c = self.coords[i];
            let (klo, khi) = (c.dbar2 * c.lo, c.dbar2 * c.hi);
            if khi <= lo {
                self.c_g += c.hi;
            } else if klo >= hi {
                self.c_g += c.lo;
            } else if klo <= lo && khi >= hi {
                self.s_g += T::one() / c.dbar2;
            } else {
                kept.push(i);
            }
        }
        self.undetermined = kept;
    }
}

fn cmp<T: Scalar>(a: &(T, usize), b: &(T, usize)) -> Ordering {
    a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal)
}

/// Solves the QP with the duplicate-tolerant halving rule.
pub fn solve_box_hyperplane<T: Scalar>(qp: &BoxHyperplaneQp<T>) -> Result<QpSolution<T>> {
    solve_box_hyperplane_with(qp, KinkRule::Duplicates)
}

#[doc(hidden)]
pub fn solve_box_hyperplane_with<T: Scalar>(
    qp: &BoxHyperplaneQp<T>,
    rule: KinkRule,
) -> Result<QpSolution<T>> {
    qp.validate()?;
    let n = qp.len();
    let mut alpha = Array1::zeros(n);

    let mut active = Vec::with_capacity(n);
    let mut coords = Vec::with_capacity(n);
    let mut zp = qp.z;
    let mut scale = qp.z.abs();
    for i in 0..n {
        let s = qp.sigma[i];
        if s == T::zero() {
            alpha[i] = clip(qp.m[i], qp.l[i], qp.u[i]);
            continue;
        }
        let (a, b) = (s * (qp.l[i] - qp.m[i]), s * (qp.u[i] - qp.m[i]));
        let (lo, hi) = if s > T::zero() { (a, b) } else { (b, a) };
        let dbar2 = (qp.d[i] * qp.d[i]) / (s * s);
        zp -= s * qp.m[i];
        scale += (s * qp.m[i]).abs() + lo.abs() + hi.abs();
        active.push(i);
        coords.push(Coord { dbar2, lo, hi });
    }

    let tol = T::lit(1e-12) * T::one().max(scale);
    let sum_lo: T = coords.iter().map(|c| c.lo).sum();
    let sum_hi: T = coords.iter().map(|c| c.hi).sum();
    if zp < sum_lo - tol || zp > sum_hi + tol {
        return Err(AgmError::Infeasible(format!(
            "hyperplane level outside the box range: need {} <= {} <= {}",
            sum_lo, zp, sum_hi
        )));
    }
    if coords.is_empty() {
        return Ok(QpSolution { alpha, multiplier: T::zero(), rounds: 0 });
    }

    let mut kinks: Vec<(T, usize)> = Vec::with_capacity(2 * coords.len());
    for (k, c) in coords.iter().enumerate() {
        kinks.push((c.dbar2 * c.lo, k));
        kinks.push((c.dbar2 * c.hi, k));
    }
    if rule == KinkRule::Distinct {
        kinks.sort_by(cmp);
        kinks.dedup_by(|a, b| a.0 == b.0);
    }

    let k = coords.len();
    let mut search = KinkSearch {
        coords,
        c_g: T::zero(),
        s_g: T::zero(),
        undetermined: (0..k).collect(),
        zp,
    };

    let mut rounds = 0;
    let lambda = loop {
        if kinks.len() <= 2 {
            break final_bracket(&search, &kinks);
        }
        rounds += 1;
        let mid = (kinks.len() - 1) / 2;
        kinks.select_nth_unstable_by(mid, cmp);
        let m = kinks[mid].0;
        let fm = search.f(m);
        if fm == T::zero() {
            break m;
        }
        match rule {
            KinkRule::Duplicates => {
                if fm > T::zero() {
                    let y = kinks[..mid].iter().map(|p| p.0).filter(|&v| v < m).fold(None, |acc: Option<T>, v| {
                        Some(acc.map_or(v, |a| a.max(v)))
                    });
                    let Some(y) = y else { break m };
                    if search.f(y) > T::zero() {
                        kinks.retain(|p| p.0 < m);
                    } else {
                        break interpolate(&search, y, m);
                    }
                } else {
                    let y = kinks[mid + 1..].iter().map(|p| p.0).filter(|&v| v > m).fold(None, |acc: Option<T>, v| {
                        Some(acc.map_or(v, |a| a.min(v)))
                    });
                    let Some(y) = y else { break m };
                    if search.f(y) < T::zero() {
                        kinks.retain(|p| p.0 > m);
                    } else {
                        break interpolate(&search, m, y);
                    }
                }
            }
            KinkRule::Distinct => {
                if fm > T::zero() {
                    kinks.retain(|p| p.0 <= m);
                } else {
                    kinks.retain(|p| p.0 >= m);
                }
            }
        }
        search.resolve(&kinks);
    };

    for &i in &active {
        let s = qp.sigma[i];
        alpha[i] = clip(qp.m[i] + lambda * s / (qp.d[i] * qp.d[i]), qp.l[i], qp.u[i]);
    }
    Ok(QpSolution { alpha, multiplier: lambda, rounds })
}

fn final_bracket<T: Scalar>(search: &KinkSearch<T>, kinks: &[(T, usize)]) -> T {
    let lo = kinks.iter().map(|p| p.0).fold(T::infinity(), T::min);
    let hi = kinks.iter().map(|p| p.0).fold(T::neg_infinity(), T::max);
    interpolate(search, lo, hi)
}

/// Root of `f` on a bracket where it is affine.
fn interpolate<T: Scalar>(search: &KinkSearch<T>, lo: T, hi: T) -> T {
    if lo >= hi {
        return lo;
    }
    let (fl, fu) = (search.f(lo), search.f(hi));
    if fl >= T::zero() {
        return lo;
    }
    if fu <= T::zero() {
        return hi;
    }
    if fu != fl {
        clip((lo * fu - hi * fl) / (fu - fl), lo, hi)
    } else {
        T::lit(0.5) * (lo + hi)
    }
}
