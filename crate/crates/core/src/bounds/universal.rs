//! Universal inequalities on the shifted sequence `μ_i = λ_i + c`.

use super::{prefix, propagate, BoundCheck};
use crate::eigensolve::Spectrum;
use crate::error::Result;

fn shifted(values: &[f64], c: f64) -> impl Iterator<Item = f64> + '_ {
    values.iter().map(move |v| v + c)
}

fn ppw_sides(v: &[f64], n: usize, c: f64) -> (f64, f64) {
    let terms = v.len() - 1;
    let lhs = v[terms] - v[terms - 1];
    let sum: f64 = shifted(&v[..terms], c).sum();
    (lhs, 4.0 / (n as f64 * terms as f64) * sum)
}

/// `λ_{k+1} − λ_k ≤ (4/(nk)) Σ_{i≤k} (λ_i + c)`.
pub fn ppw_check(s: &Spectrum, n: usize, k: usize, c: f64) -> Result<BoundCheck> {
    let (v, u) = prefix(s, k)?;
    let (lhs, rhs) = ppw_sides(&v, n, c);
    let spread = propagate(&v, &u, |w| {
        let (l, r) = ppw_sides(w, n, c);
        l - r
    });
    Ok(BoundCheck::new("ppw", k, lhs, rhs, spread))
}

fn hp_sides(v: &[f64], n: usize, c: f64) -> (f64, f64) {
    let terms = v.len() - 1;
    let top = v[terms] + c;
    let mut rhs = 0.0;
    for mu in shifted(&v[..terms], c) {
        let gap = top - mu;
        if gap <= 0.0 {
            rhs = f64::INFINITY;
            break;
        }
        rhs += mu / gap;
    }
    (n as f64 * terms as f64 / 4.0, rhs)
}

/// `nk/4 ≤ Σ_{i≤k} (λ_i + c)/(λ_{k+1} − λ_i)`; a repeated top eigenvalue
/// makes the right side infinite.
pub fn hile_protter_check(s: &Spectrum, n: usize, k: usize, c: f64) -> Result<BoundCheck> {
    let (v, u) = prefix(s, k)?;
    let (lhs, rhs) = hp_sides(&v, n, c);
    let spread = if rhs.is_finite() {
        propagate(&v, &u, |w| {
            let (l, r) = hp_sides(w, n, c);
            l - r
        })
    } else {
        0.0
    };
    Ok(BoundCheck::new("hp", k, lhs, rhs, spread))
}

pub(super) fn yang1_sides(v: &[f64], n: usize, c: f64) -> (f64, f64) {
    let terms = v.len() - 1;
    let top = v[terms];
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for &l in &v[..terms] {
        let g = top - l;
        lhs += g * g;
        rhs += g * (l + c);
    }
    (lhs, 4.0 / n as f64 * rhs)
}

/// `Σ (λ_{k+1} − λ_i)² ≤ (4/n) Σ (λ_{k+1} − λ_i)(λ_i + c)`.
pub fn yang_first_check(s: &Spectrum, n: usize, k: usize, c: f64) -> Result<BoundCheck> {
    let (v, u) = prefix(s, k)?;
    let (lhs, rhs) = yang1_sides(&v, n, c);
    let spread = propagate(&v, &u, |w| {
        let (l, r) = yang1_sides(w, n, c);
        l - r
    });
    Ok(BoundCheck::new("yang1", k, lhs, rhs, spread))
}

fn yang2_sides(v: &[f64], n: usize, c: f64) -> (f64, f64) {
    let terms = v.len() - 1;
    let sum: f64 = shifted(&v[..terms], c).sum();
    (v[terms] + c, (1.0 + 4.0 / n as f64) * sum / terms as f64)
}

/// `λ_{k+1} + c ≤ (1/k)(1 + 4/n) Σ (λ_i + c)`.
pub fn yang_second_check(s: &Spectrum, n: usize, k: usize, c: f64) -> Result<BoundCheck> {
    let (v, u) = prefix(s, k)?;
    let (lhs, rhs) = yang2_sides(&v, n, c);
    let spread = propagate(&v, &u, |w| {
        let (l, r) = yang2_sides(w, n, c);
        l - r
    });
    Ok(BoundCheck::new("yang2", k, lhs, rhs, spread))
}

/// `λ_{k+1} ≤ C₀(λ₁ + c)k^{2/n} − c`, with `λ₁` the first list entry.
pub fn zlz_upper_check(s: &Spectrum, n: usize, k: usize, c: f64, c0: f64) -> Result<BoundCheck> {
    let (v, u) = prefix(s, k)?;
    let terms = v.len() - 1;
    let sides = |w: &[f64]| (w[terms], super::cheng_yang_upper(w[0], n, terms, c, c0));
    let (lhs, rhs) = sides(&v);
    let spread = propagate(&v, &u, |w| {
        let (l, r) = sides(w);
        l - r
    });
    Ok(BoundCheck::new("zlz_upper", k, lhs, rhs, spread))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Verdict;
    use crate::oracles::{interval_spectrum, torus_spectrum};
    use core::f64::consts::PI;

    #[test]
    fn ppw_examples() {
        let s = interval_spectrum(PI, 5).unwrap();
        let a = ppw_check(&s, 1, 1, 0.0).unwrap();
        assert_eq!((a.lhs, a.rhs), (3.0, 4.0));
        assert!(a.holds());
        let b = ppw_check(&s, 1, 2, 0.0).unwrap();
        assert_eq!((b.lhs, b.rhs), (5.0, 10.0));
        let flat = Spectrum::from_values(alloc::vec![2.5; 6], 1, "flat", 3);
        let c = ppw_check(&flat, 3, 4, 0.0).unwrap();
        assert_eq!(c.lhs, 0.0);
        assert!(c.holds());
    }

    #[test]
    fn hile_protter_examples() {
        let s = interval_spectrum(PI, 5).unwrap();
        let a = hile_protter_check(&s, 1, 1, 0.0).unwrap();
        assert_eq!(a.lhs, 0.25);
        assert!((a.rhs - 1.0 / 3.0).abs() < 1e-15);
        let b = hile_protter_check(&s, 1, 2, 0.0).unwrap();
        assert!((b.rhs - 0.925).abs() < 1e-15);
        assert_eq!(b.lhs, 0.5);
        let tied = Spectrum::from_values(alloc::vec![1.0, 3.0, 3.0], 1, "tied", 2);
        let t = hile_protter_check(&tied, 2, 2, 0.0).unwrap();
        assert_eq!(t.rhs, f64::INFINITY);
        assert!(t.holds());
    }

    #[test]
    fn yang_examples() {
        let s = interval_spectrum(PI, 5).unwrap();
        let a = yang_first_check(&s, 1, 1, 0.0).unwrap();
        assert_eq!((a.lhs, a.rhs), (9.0, 12.0));
        let b = yang_first_check(&s, 1, 2, 0.0).unwrap();
        assert_eq!((b.lhs, b.rhs), (89.0, 112.0));
        let big = yang_first_check(&s, 1, 2, 1e6).unwrap();
        assert_eq!(big.verdict, Verdict::HoldsStrictly);

        let y2 = yang_second_check(&s, 1, 2, 0.0).unwrap();
        assert_eq!((y2.lhs, y2.rhs), (9.0, 12.5));
        let one = yang_second_check(&s, 2, 1, 0.5).unwrap();
        assert_eq!(one.rhs, 3.0 * 1.5);
        let flat = Spectrum::from_values(alloc::vec![4.0, 4.0], 1, "flat", 1);
        assert!(yang_second_check(&flat, 1, 1, 0.0).unwrap().holds());
    }

    #[test]
    fn circle_equality_cases_hold() {
        // c = 1/4 makes the first Yang inequality an equality on the circle
        let s = torus_spectrum(&[2.0 * PI], 30).unwrap();
        let y = yang_first_check(&s, 1, 1, 0.25).unwrap();
        assert_eq!(y.lhs, y.rhs);
        assert_eq!(y.verdict, Verdict::Holds);
        for k in 1..=20 {
            assert!(ppw_check(&s, 1, k, 0.25).unwrap().holds());
            assert!(hile_protter_check(&s, 1, k, 0.25).unwrap().holds());
            assert!(yang_first_check(&s, 1, k, 0.25).unwrap().holds());
            assert!(yang_second_check(&s, 1, k, 0.25).unwrap().holds());
        }
    }

    #[test]
    fn zlz_upper_examples() {
        let s = interval_spectrum(PI, 5).unwrap();
        let z = zlz_upper_check(&s, 1, 2, 0.0, 5.0).unwrap();
        assert_eq!((z.lhs, z.rhs), (9.0, 20.0));
    }

    #[test]
    fn index_errors() {
        let s = interval_spectrum(PI, 3).unwrap();
        assert!(ppw_check(&s, 1, 3, 0.0).is_err());
        assert!(ppw_check(&s, 1, 0, 0.0).is_err());
        assert!(ppw_check(&s, 1, 2, 0.0).is_ok());
    }
}
