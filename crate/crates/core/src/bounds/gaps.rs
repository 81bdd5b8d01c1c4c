//! Upper bounds for consecutive gaps `λ_{k+1} − λ_k`.

use alloc::vec::Vec;

use super::{propagate, BoundCheck, ConstantsBundle};
use crate::eigensolve::Spectrum;
use crate::error::{Error, Result};

/// Which index enters the `(·)^{1/n}` growth factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum GapExponent {
    K,
    KPlusOne,
}

impl GapExponent {
    /// `k` for Dirichlet spectra, `k + 1` for closed ones.
    pub fn default_for(s: &Spectrum) -> Self {
        if s.is_closed() {
            GapExponent::KPlusOne
        } else {
            GapExponent::K
        }
    }

    pub fn index(self, k: usize) -> usize {
        match self {
            GapExponent::K => k,
            GapExponent::KPlusOne => k + 1,
        }
    }
}

fn root(index: usize, n: usize) -> f64 {
    libm::pow(index as f64, 1.0 / n as f64)
}

fn bundle_gap(lambda1: f64, b: &ConstantsBundle, denom: f64, index: usize) -> Result<f64> {
    if !(denom > 0.0) {
        return Err(Error::DegenerateBundle);
    }
    let a = b.alpha_max;
    Ok((lambda1 + b.c) * libm::sqrt(32.0 * a * a * b.c0 / denom) * root(index, b.n))
}

/// `(λ₁ + c) √(32ᾱ²C₀ / (nα² + (n+p)β)) · i^{1/n}` with `i` picked by `exponent`.
pub fn gap_bound_thm11(lambda1: f64, b: &ConstantsBundle, k: usize, exponent: GapExponent) -> Result<f64> {
    let n = b.n as f64;
    let denom = n * b.alpha_min * b.alpha_min + (b.n + b.p) as f64 * b.beta;
    bundle_gap(lambda1, b, denom, exponent.index(k))
}

/// As [`gap_bound_thm11`] with denominator `nα² + Σ b_j`.
pub fn gap_bound_ricci(lambda1: f64, b: &ConstantsBundle, k: usize, exponent: GapExponent) -> Result<f64> {
    let denom = b.n as f64 * b.alpha_min * b.alpha_min + b.b_list.iter().sum::<f64>();
    bundle_gap(lambda1, b, denom, exponent.index(k))
}

/// `4(λ₁ + c)√(C₀/n) k^{1/n}` with `c = (4n − min|x|²)/16` and `C₀ = 1 + 4/n`.
pub fn gaussian_soliton_gap(lambda1: f64, n: usize, k: usize, min_xsq: f64) -> f64 {
    let nf = n as f64;
    let c = (4.0 * nf - min_xsq) / 16.0;
    let c0 = 1.0 + 4.0 / nf;
    4.0 * (lambda1 + c) * libm::sqrt(c0 / nf) * root(k, n)
}

/// Shift `c₂ = g/4 + mG·s` where `s² = C₀K(λ₁ + c₂) − c₂`, `K = k^{2/m}`,
/// `G = max|∇f|` and `g = max|∇f|²`.
pub fn product_manifold_c2(lambda1: f64, m: usize, k: usize, grad_f_max: f64, grad_f_sq_max: f64, c0: f64) -> f64 {
    let mf = m as f64;
    let kk = libm::pow(k as f64, 2.0 / mf);
    let a = (c0 * kk - 1.0) * mf * grad_f_max;
    let b = (c0 * kk - 1.0) * grad_f_sq_max / 4.0 + c0 * kk * lambda1;
    let s = 0.5 * (a + libm::sqrt(a * a + 4.0 * b));
    grad_f_sq_max / 4.0 + mf * grad_f_max * s
}

/// Gap bound on a product with an `m`-dimensional weighted Euclidean factor.
pub fn product_manifold_gap(
    lambda1: f64,
    m: usize,
    k: usize,
    grad_f_max: f64,
    grad_f_sq_max: f64,
    c0: f64,
) -> Result<f64> {
    if m == 0 || k == 0 {
        return Err(Error::InvalidArgument("m and k must be positive"));
    }
    if !(grad_f_max >= 0.0 && grad_f_sq_max >= 0.0 && c0 >= 1.0) {
        return Err(Error::InvalidArgument("gradient bounds must be nonnegative and C₀ ≥ 1"));
    }
    let mf = m as f64;
    let c2 = product_manifold_c2(lambda1, m, k, grad_f_max, grad_f_sq_max, c0);
    let rk = root(k, m);
    let first = libm::sqrt(4.0 * c0 * (lambda1 + c2) / mf);
    let second =
        libm::sqrt(4.0 * lambda1 + grad_f_sq_max + 4.0 * mf * grad_f_max * libm::sqrt(c0 * (lambda1 + c2)) * rk);
    Ok(first * second * rk)
}

/// `λ_{k+1} − λ_k ≤ bound(λ₁)`, where `λ₁` is the list entry of index 1.
fn gap_check(name: &'static str, s: &Spectrum, k: usize, bound: impl Fn(f64) -> Result<f64>) -> Result<BoundCheck> {
    if k < 1 {
        return Err(Error::InvalidArgument("k must be at least 1"));
    }
    let mut idx: Vec<usize> = Vec::with_capacity(3);
    for i in [1, k, k + 1] {
        if !idx.contains(&i) {
            idx.push(i);
        }
    }
    let values = idx.iter().map(|&i| s.lambda(i)).collect::<Result<Vec<_>>>()?;
    let uncs = idx.iter().map(|&i| s.uncertainty(i)).collect::<Result<Vec<_>>>()?;
    let pos = |i: usize| idx.iter().position(|&j| j == i).expect("index present");
    let (p1, pk, pk1) = (pos(1), pos(k), pos(k + 1));
    let lhs = values[pk1] - values[pk];
    let rhs = bound(values[p1])?;
    let spread = propagate(&values, &uncs, |w| (w[pk1] - w[pk]) - bound(w[p1]).unwrap_or(f64::NAN));
    Ok(BoundCheck::new(name, k, lhs, rhs, spread))
}

pub fn thm11_gap_check(s: &Spectrum, b: &ConstantsBundle, k: usize, exponent: GapExponent) -> Result<BoundCheck> {
    gap_check("thm11_gap", s, k, |l1| gap_bound_thm11(l1, b, k, exponent))
}

/// The bundle's `c` should come from [`super::self_shrinker_c`].
pub fn self_shrinker_gap_check(
    s: &Spectrum,
    b: &ConstantsBundle,
    k: usize,
    exponent: GapExponent,
) -> Result<BoundCheck> {
    gap_check("self_shrinker_gap", s, k, |l1| gap_bound_thm11(l1, b, k, exponent))
}

/// The bundle's `c` should come from [`super::ricci_soliton_c`].
pub fn ricci_soliton_gap_check(
    s: &Spectrum,
    b: &ConstantsBundle,
    k: usize,
    exponent: GapExponent,
) -> Result<BoundCheck> {
    gap_check("ricci_soliton_gap", s, k, |l1| gap_bound_ricci(l1, b, k, exponent))
}

pub fn gaussian_gap_check(s: &Spectrum, n: usize, k: usize, min_xsq: f64) -> Result<BoundCheck> {
    gap_check("gaussian_gap", s, k, |l1| Ok(gaussian_soliton_gap(l1, n, k, min_xsq)))
}

pub fn product_gap_check(
    s: &Spectrum,
    m: usize,
    k: usize,
    grad_f_max: f64,
    grad_f_sq_max: f64,
    c0: f64,
) -> Result<BoundCheck> {
    gap_check("product_gap", s, k, |l1| product_manifold_gap(l1, m, k, grad_f_max, grad_f_sq_max, c0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureReport {
    pub checks: Vec<BoundCheck>,
    pub min_slack: f64,
    /// Indices `k` whose check was violated.
    pub violations: Vec<usize>,
}

/// Tests `λ_{k+1} − λ_k ≤ (λ₂ − λ₁) k^{1/n}` for `k = 1..=k_max`, stopping
/// early when the spectrum runs out. Only Dirichlet spectra qualify.
pub fn conjecture_check(s: &Spectrum, n: usize, k_max: usize) -> Result<ConjectureReport> {
    if s.is_closed() {
        return Err(Error::Unsupported("the gap conjecture concerns Dirichlet spectra"));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive"));
    }
    let last = s.last_index().unwrap_or(0);
    if last < 2 {
        return Err(Error::Index { index: 2, available: s.len() });
    }
    let mut checks = Vec::new();
    for k in 1..=k_max.min(last - 1) {
        let values = [s.lambda(1)?, s.lambda(2)?, s.lambda(k)?, s.lambda(k + 1)?];
        let uncs = [s.uncertainty(1)?, s.uncertainty(2)?, s.uncertainty(k)?, s.uncertainty(k + 1)?];
        let rk = root(k, n);
        let sides = |w: &[f64]| (w[3] - w[2], (w[1] - w[0]) * rk);
        let (lhs, rhs) = sides(&values);
        // repeated indices are perturbed once, by the first slot they occupy
        let mut u = uncs;
        if k == 1 {
            u[2] = 0.0;
            u[3] = 0.0;
        } else if k == 2 {
            u[2] = 0.0;
        }
        let spread = propagate(&values, &u, |w| {
            let mut w = [w[0], w[1], w[2], w[3]];
            if k == 1 {
                w[2] = w[0];
                w[3] = w[1];
            } else if k == 2 {
                w[2] = w[1];
            }
            let (l, r) = sides(&w);
            l - r
        });
        checks.push(BoundCheck::new("conjecture", k, lhs, rhs, spread));
    }
    let min_slack = checks.iter().map(|c| c.slack).fold(f64::INFINITY, f64::min);
    let violations = checks.iter().filter(|c| !c.holds()).map(|c| c.k).collect();
    Ok(ConjectureReport { checks, min_slack, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{interval_spectrum, sphere_spectrum, torus_spectrum};
    use core::f64::consts::PI;

    #[test]
    fn thm11_flat_interval() {
        let b = ConstantsBundle::flat(1);
        let v = gap_bound_thm11(1.0, &b, 1, GapExponent::K).unwrap();
        assert!((v - libm::sqrt(80.0)).abs() < 1e-12);
        let s = interval_spectrum(PI, 40).unwrap();
        for k in 1..40 {
            let c = thm11_gap_check(&s, &b, k, GapExponent::K).unwrap();
            assert!((c.lhs - (2 * k + 1) as f64).abs() < 1e-12);
            assert!(c.holds(), "{c:?}");
        }
    }

    #[test]
    fn degenerate_bundle() {
        let mut b = ConstantsBundle::flat(2);
        b.beta = 0.0;
        b.alpha_min = 1e-300;
        assert!(matches!(gap_bound_thm11(1.0, &b, 1, GapExponent::K), Err(Error::DegenerateBundle)));
        let mut r = ConstantsBundle::flat(2);
        r.alpha_min = 1e-300;
        r.b_list = alloc::vec![0.0, 0.0];
        assert!(matches!(gap_bound_ricci(1.0, &r, 1, GapExponent::K), Err(Error::DegenerateBundle)));
    }

    #[test]
    fn gaussian_matches_flat_form() {
        // c = (4n − min|x|²)/16 vanishes when min|x|² = 4n
        let v = gaussian_soliton_gap(2.0, 1, 4, 4.0);
        assert!((v - 4.0 * 2.0 * libm::sqrt(5.0) * 4.0).abs() < 1e-12);
    }

    #[test]
    fn product_gap_reduces_for_constant_weight() {
        for m in 1..4 {
            for k in 1..6 {
                let v = product_manifold_gap(1.5, m, k, 0.0, 0.0, 1.0 + 4.0 / m as f64).unwrap();
                let expect = 4.0 * 1.5 * libm::sqrt((1.0 + 4.0 / m as f64) / m as f64) * root(k, m);
                assert!((v - expect).abs() < 1e-12 * expect);
            }
        }
    }

    #[test]
    fn product_c2_is_fixed_point() {
        let (l1, m, k, g, c0) = (2.0, 2, 5, 0.7, 3.0);
        let c2 = product_manifold_c2(l1, m, k, g, g * g, c0);
        let kk = libm::pow(k as f64, 2.0 / m as f64);
        let upper = c0 * (l1 + c2) * kk - c2;
        let again = g * g / 4.0 + m as f64 * g * libm::sqrt(upper);
        assert!((again - c2).abs() < 1e-12 * c2);
    }

    #[test]
    fn closed_sphere_uses_first_nonzero() {
        let n = 2;
        let s = sphere_spectrum(n, libm::sqrt(n as f64), 40).unwrap();
        let b = ConstantsBundle::flat(n).with_codimension(1).with_c(0.75 * n as f64);
        for k in 1..35 {
            let c = self_shrinker_gap_check(&s, &b, k, GapExponent::default_for(&s)).unwrap();
            assert!(c.holds(), "{c:?}");
        }
    }

    #[test]
    fn conjecture_on_interval_and_torus() {
        let s = interval_spectrum(PI, 20).unwrap();
        let r = conjecture_check(&s, 1, 100).unwrap();
        assert_eq!(r.checks.len(), 19);
        assert!(r.violations.is_empty());
        assert_eq!(r.checks[0].slack, 0.0);
        let t = torus_spectrum(&[1.0], 5).unwrap();
        assert!(matches!(conjecture_check(&t, 1, 3), Err(Error::Unsupported(_))));
    }
}
