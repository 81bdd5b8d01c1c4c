//! Closed-form reference spectra.
//!
//! Lattice spectra (boxes, tori, Ornstein–Uhlenbeck) are enumerated below a
//! ceiling that doubles until it holds `k` values, so no value outside the
//! enumeration can undercut the reported ones.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::eigensolve::Spectrum;
use crate::error::{Error, Result};

/// Sorted sums `Σ_a axis(a, t_a)` over all multi-indices `t`, first `k`.
/// Each `axis(a, ·)` must be nondecreasing in its index.
fn lattice_smallest(dims: usize, k: usize, axis: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    if k == 0 {
        return Vec::new();
    }
    let base: f64 = (0..dims).map(|a| axis(a, 0)).sum();
    let mut step = (0..dims).map(|a| axis(a, 1) - axis(a, 0)).fold(f64::INFINITY, f64::min);
    if !(step > 0.0) {
        step = 1.0;
    }
    let mut ceiling = base + step;
    loop {
        let mut found = Vec::new();
        collect(dims, &axis, 0, 0.0, ceiling, base, &mut found);
        if found.len() >= k {
            found.sort_by(|a, b| a.total_cmp(b));
            found.truncate(k);
            return found;
        }
        ceiling = base + 2.0 * (ceiling - base);
    }
}

fn collect(
    dims: usize,
    axis: &impl Fn(usize, usize) -> f64,
    a: usize,
    partial: f64,
    ceiling: f64,
    base: f64,
    out: &mut Vec<f64>,
) {
    if a == dims {
        out.push(partial);
        return;
    }
    let rest: f64 = (a + 1..dims).map(|b| axis(b, 0)).sum();
    let _ = base;
    let mut t = 0;
    loop {
        let v = partial + axis(a, t);
        if v + rest > ceiling {
            break;
        }
        collect(dims, axis, a + 1, v, ceiling, base, out);
        t += 1;
    }
}

fn exact(values: Vec<f64>, index_base: usize, label: &str, dimension: usize) -> Spectrum {
    Spectrum::from_values(values, index_base, label, dimension)
}

/// Dirichlet spectrum of `[0, L]`: `(jπ/L)²`, `j = 1..k`.
pub fn interval_spectrum(length: f64, k: usize) -> Result<Spectrum> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::InvalidDomain("interval length must be positive"));
    }
    let values = (1..=k).map(|j| (j as f64 * PI / length) * (j as f64 * PI / length)).collect();
    Ok(exact(values, 1, &format!("interval(L={length})"), 1))
}

/// Dirichlet spectrum of a box: sorted `Σ (j_a π / L_a)²` over `j_a ≥ 1`.
pub fn box_spectrum(lengths: &[f64], k: usize) -> Result<Spectrum> {
    if lengths.is_empty() || lengths.iter().any(|l| !(*l > 0.0) || !l.is_finite()) {
        return Err(Error::InvalidDomain("box side lengths must be positive"));
    }
    let values = lattice_smallest(lengths.len(), k, |a, t| {
        let w = (t + 1) as f64 * PI / lengths[a];
        w * w
    });
    Ok(exact(values, 1, &format!("box(L={lengths:?})"), lengths.len()))
}

/// Closed spectrum of the flat torus `∏ ℝ/P_aℤ`: sorted `Σ (2π m_a / P_a)²`.
pub fn torus_spectrum(periods: &[f64], k: usize) -> Result<Spectrum> {
    if periods.is_empty() || periods.iter().any(|p| !(*p > 0.0) || !p.is_finite()) {
        return Err(Error::InvalidDomain("torus periods must be positive"));
    }
    // index t ↦ m = ⌈t/2⌉ lists 0, ±1, ±2, … in nondecreasing order
    let values = lattice_smallest(periods.len(), k, |a, t| {
        let m = t.div_ceil(2) as f64;
        let w = 2.0 * PI * m / periods[a];
        w * w
    });
    Ok(exact(values, 0, &format!("torus(P={periods:?})"), periods.len()))
}

fn binomial(n: i64, r: i64) -> u128 {
    if r < 0 || n < 0 || r > n {
        return 0;
    }
    let r = r.min(n - r) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Multiplicity of the degree-`l` eigenspace on `S^m`.
pub fn sphere_multiplicity(m: usize, l: usize) -> u128 {
    let (m, l) = (m as i64, l as i64);
    binomial(m + l, l) - binomial(m + l - 2, l - 2)
}

/// Closed spectrum of the round sphere `S^m(r)`: `l(l+m−1)/r²`.
pub fn sphere_spectrum(m: usize, radius: f64, k: usize) -> Result<Spectrum> {
    if m < 1 {
        return Err(Error::InvalidDomain("sphere dimension must be at least 1"));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidDomain("sphere radius must be positive"));
    }
    let mut values = Vec::with_capacity(k);
    let mut l = 0usize;
    while values.len() < k {
        let v = (l * (l + m - 1)) as f64 / (radius * radius);
        let mult = sphere_multiplicity(m, l);
        let take = mult.min((k - values.len()) as u128) as usize;
        values.extend(core::iter::repeat_n(v, take));
        l += 1;
    }
    Ok(exact(values, 0, &format!("sphere(m={m},r={radius})"), m))
}

/// Spectrum of `−Δ_f` on `ℝ^d` with `f = a|x|²`: `2a|α|` over `α ∈ ℕ^d`.
pub fn ou_spectrum(dim: usize, coeff: f64, k: usize) -> Result<Spectrum> {
    if dim < 1 {
        return Err(Error::InvalidDomain("dimension must be at least 1"));
    }
    if !(coeff > 0.0) || !coeff.is_finite() {
        return Err(Error::Unsupported("f = a|x|² with a ≤ 0 has no discrete spectrum"));
    }
    let mut values = Vec::with_capacity(k);
    let mut level = 0usize;
    while values.len() < k {
        let v = 2.0 * coeff * level as f64;
        let mult = binomial((level + dim - 1) as i64, (dim - 1) as i64);
        let take = mult.min((k - values.len()) as u128) as usize;
        values.extend(core::iter::repeat_n(v, take));
        level += 1;
    }
    Ok(exact(values, 0, &format!("ou(d={dim},a={coeff})"), dim))
}

/// Spectrum of a product: sorted pairwise sums, first `k`.
///
/// A sum outside the two prefixes is at least `max(s1) + min(s2)` or
/// `min(s1) + max(s2)`, so the result is certified when both exceed the
/// `k`-th reported sum (or the corresponding factor is exhaustive).
pub fn product_spectrum(s1: &Spectrum, s2: &Spectrum, k: usize) -> Result<Spectrum> {
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::UnderResolved { needed_first: 1, needed_second: 1 });
    }
    let mut sums: Vec<(f64, usize, usize)> = Vec::with_capacity(s1.len() * s2.len());
    for (i, a) in s1.eigenvalues.iter().enumerate() {
        for (j, b) in s2.eigenvalues.iter().enumerate() {
            sums.push((a + b, i, j));
        }
    }
    sums.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    if k > sums.len() {
        return Err(Error::UnderResolved {
            needed_first: if s1.exhaustive { s1.len() } else { s1.len() + 1 },
            needed_second: if s2.exhaustive { s2.len() } else { s2.len() + 1 },
        });
    }
    sums.truncate(k);
    let max1 = s1.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min1 = s1.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let max2 = s2.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min2 = s2.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if let Some(&(top, _, _)) = sums.last() {
        let first_ok = s1.exhaustive || max1 + min2 >= top;
        let second_ok = s2.exhaustive || min1 + max2 >= top;
        if !(first_ok && second_ok) {
            return Err(Error::UnderResolved {
                needed_first: s1.len() + usize::from(!first_ok),
                needed_second: s2.len() + usize::from(!second_ok),
            });
        }
    }
    let eigenvalues = sums.iter().map(|s| s.0).collect();
    let uncertainties = sums
        .iter()
        .map(|s| s.1)
        .zip(sums.iter().map(|s| s.2))
        .map(|(i, j)| s1.uncertainties[i] + s2.uncertainties[j])
        .collect();
    let residual_norms = sums.iter().map(|s| s1.residual_norms[s.1].max(s2.residual_norms[s.2])).collect();
    let mut out = exact(
        eigenvalues,
        s1.index_base.max(s2.index_base),
        &format!("{} x {}", s1.descriptor.label, s2.descriptor.label),
        s1.dimension() + s2.dimension(),
    );
    out.uncertainties = uncertainties;
    out.residual_norms = residual_norms;
    out.exhaustive = s1.exhaustive && s2.exhaustive && k == s1.len() * s2.len();
    Ok(out)
}

/// The one-point spectrum `{0}`, the identity for [`product_spectrum`].
pub fn point_spectrum() -> Spectrum {
    let mut s = exact(vec![0.0], 0, "point", 0);
    s.exhaustive = true;
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_values(s: &Spectrum, expected: &[f64]) {
        assert_eq!(s.len(), expected.len());
        for (a, b) in s.eigenvalues.iter().zip(expected) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{:?} vs {:?}", s.eigenvalues, expected);
        }
    }

    #[test]
    fn interval_examples() {
        assert_values(&interval_spectrum(PI, 3).unwrap(), &[1.0, 4.0, 9.0]);
        assert_values(&interval_spectrum(1.0, 1).unwrap(), &[PI * PI]);
        assert_values(&interval_spectrum(2.0 * PI, 2).unwrap(), &[0.25, 1.0]);
        assert!(interval_spectrum(0.0, 2).is_err());
    }

    #[test]
    fn box_examples() {
        assert_values(&box_spectrum(&[PI, PI], 4).unwrap(), &[2.0, 5.0, 5.0, 8.0]);
        assert_values(&box_spectrum(&[PI], 2).unwrap(), &[1.0, 4.0]);
        assert_values(&box_spectrum(&[PI, 2.0 * PI], 3).unwrap(), &[1.25, 2.0, 3.25]);
        assert_values(&box_spectrum(&[PI, PI], 6).unwrap(), &[2.0, 5.0, 5.0, 8.0, 10.0, 10.0]);
    }

    #[test]
    fn torus_examples() {
        assert_values(&torus_spectrum(&[2.0 * PI], 3).unwrap(), &[0.0, 1.0, 1.0]);
        assert_values(&torus_spectrum(&[2.0 * PI, 2.0 * PI], 5).unwrap(), &[0.0, 1.0, 1.0, 1.0, 1.0]);
        assert_values(&torus_spectrum(&[1.0], 2).unwrap(), &[0.0, 4.0 * PI * PI]);
        assert_eq!(torus_spectrum(&[1.0], 2).unwrap().index_base, 0);
    }

    #[test]
    fn sphere_examples() {
        assert_values(&sphere_spectrum(2, 1.0, 4).unwrap(), &[0.0, 2.0, 2.0, 2.0]);
        assert_values(&sphere_spectrum(2, libm::sqrt(2.0), 2).unwrap(), &[0.0, 1.0]);
        assert_values(&sphere_spectrum(1, 1.0, 3).unwrap(), &[0.0, 1.0, 1.0]);
        assert!(matches!(sphere_spectrum(0, 1.0, 3), Err(Error::InvalidDomain(_))));
    }

    #[test]
    fn sphere_multiplicity_counts() {
        let mut total = 0u128;
        for l in 0..=10 {
            total += sphere_multiplicity(2, l);
            assert_eq!(total, ((l + 1) * (l + 1)) as u128);
        }
        assert_eq!(sphere_multiplicity(3, 2), 9);
    }

    #[test]
    fn ou_examples() {
        assert_values(&ou_spectrum(1, 0.5, 4).unwrap(), &[0.0, 1.0, 2.0, 3.0]);
        assert_values(&ou_spectrum(2, 0.5, 4).unwrap(), &[0.0, 1.0, 1.0, 2.0]);
        assert_values(&ou_spectrum(1, 0.25, 3).unwrap(), &[0.0, 0.5, 1.0]);
        assert!(matches!(ou_spectrum(1, 0.0, 3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn product_examples() {
        let a = Spectrum::from_values(vec![1.0, 4.0, 9.0], 1, "a", 1);
        let b = sphere_spectrum(2, 1.0, 4).unwrap();
        assert_values(&product_spectrum(&a, &b, 4).unwrap(), &[1.0, 3.0, 3.0, 3.0]);

        let s = box_spectrum(&[PI, 2.0], 7).unwrap();
        let p = product_spectrum(&s, &point_spectrum(), 7).unwrap();
        assert_eq!(p.eigenvalues, s.eigenvalues);

        let ou = ou_spectrum(1, 0.5, 4).unwrap();
        let circle = sphere_spectrum(1, 1.0, 4).unwrap();
        assert_values(&product_spectrum(&ou, &circle, 4).unwrap(), &[0.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn product_detects_under_resolution() {
        let a = Spectrum::from_values(vec![0.0, 1.0], 0, "a", 1);
        let b = Spectrum::from_values(vec![0.0, 10.0], 0, "b", 1);
        // 3rd smallest sum is 10 (0+10), but a's next entry could be below it
        let r = product_spectrum(&a, &b, 3);
        assert!(matches!(r, Err(Error::UnderResolved { needed_first: 3, needed_second: 2 })));
        assert!(matches!(product_spectrum(&a, &b, 5), Err(Error::UnderResolved { .. })));
    }

    #[test]
    fn box_matches_interval() {
        for l in [0.5, 1.0, PI, 7.0] {
            assert_eq!(box_spectrum(&[l], 12).unwrap().eigenvalues, interval_spectrum(l, 12).unwrap().eigenvalues);
        }
    }
}
