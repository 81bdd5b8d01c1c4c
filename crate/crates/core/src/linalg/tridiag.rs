//! Symmetric tridiagonal eigenproblems: Sturm-sequence bisection for the
//! low eigenvalues and inverse iteration for their vectors.

use alloc::vec;
use alloc::vec::Vec;

use crate::util::{dot, norm, scale};

/// Symmetric tridiagonal matrix with diagonal `d` and off-diagonal `e`
/// (`e[i]` couples rows `i` and `i + 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
}

impl SymTridiagonal {
    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.e[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.e[i].abs() } else { 0.0 };
            lo = lo.min(self.d[i] - r);
            hi = hi.max(self.d[i] + r);
        }
        (lo, hi)
    }

    fn pivmin(&self) -> f64 {
        let m = self.e.iter().map(|x| x * x).fold(1.0_f64, f64::max);
        f64::MIN_POSITIVE * m
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let pivmin = self.pivmin();
        let mut count = 0;
        let mut q = self.d[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            q = self.d[i] - x - self.e[i - 1] * self.e[i - 1] / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k` smallest eigenvalues in ascending order, each bisected to
    /// full working precision.
    pub fn smallest_eigenvalues(&self, k: usize) -> Vec<f64> {
        let k = k.min(self.len());
        let (glo, ghi) = self.gershgorin();
        let span = (ghi - glo).abs().max(f64::MIN_POSITIVE);
        let lo0 = glo - 2.0 * f64::EPSILON * span - self.pivmin();
        let hi0 = ghi + 2.0 * f64::EPSILON * span + self.pivmin();
        let mut out = Vec::with_capacity(k);
        let mut floor = lo0;
        for j in 0..k {
            let mut lo = floor;
            let mut hi = hi0;
            for _ in 0..200 {
                let tol = 2.0 * f64::EPSILON * (lo.abs() + hi.abs()) + self.pivmin();
                if hi - lo <= tol {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if self.sturm_count(mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let lambda = 0.5 * (lo + hi);
            out.push(lambda);
            floor = lo;
        }
        out
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.len();
        for i in 0..n {
            let mut s = self.d[i] * x[i];
            if i > 0 {
                s += self.e[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.e[i] * x[i + 1];
            }
            y[i] = s;
        }
    }

    /// Unit eigenvector for the (accurate) eigenvalue `lambda`, kept
    /// orthogonal to `previous` vectors whose eigenvalues lie in the same
    /// cluster.
    pub fn eigenvector(&self, lambda: f64, previous: &[(f64, Vec<f64>)]) -> Vec<f64> {
        let n = self.len();
        let (glo, ghi) = self.gershgorin();
        let tnorm = glo.abs().max(ghi.abs()).max(f64::MIN_POSITIVE);
        let cluster = 1e-3 * tnorm;
        let lu = ShiftedLu::factor(self, lambda, tnorm);
        let mut x: Vec<f64> = (0..n)
            .map(|i| {
                let h = (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
                0.5 + ((h >> 11) as f64) / ((1u64 << 53) as f64)
            })
            .collect();
        for _ in 0..4 {
            for (mu, v) in previous {
                if (mu - lambda).abs() < cluster {
                    let c = dot(&x, v);
                    for (xi, vi) in x.iter_mut().zip(v) {
                        *xi -= c * vi;
                    }
                }
            }
            let nx = norm(&x);
            scale(1.0 / nx, &mut x);
            lu.solve(&mut x);
        }
        for (mu, v) in previous {
            if (mu - lambda).abs() < cluster {
                let c = dot(&x, v);
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi -= c * vi;
                }
            }
        }
        let nx = norm(&x);
        scale(1.0 / nx, &mut x);
        x
    }
}

/// LU factorization with partial pivoting of `T − λI`.
struct ShiftedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swap: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &SymTridiagonal, lambda: f64, tnorm: f64) -> Self {
        let n = t.len();
        let mut dl = t.e.clone();
        let mut du = t.e.clone();
        let mut d: Vec<f64> = t.d.iter().map(|x| x - lambda).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swap = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swap[i] = true;
            }
        }
        let tiny = f64::EPSILON * tnorm;
        for di in d.iter_mut() {
            if di.abs() < tiny {
                *di = if *di < 0.0 { -tiny } else { tiny };
            }
        }
        Self { dl, d, du, du2, swap }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swap[i] {
                let temp = b[i] - self.dl[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = temp;
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
        let m = b.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if m > 1e150 || !m.is_finite() {
            let s = if m.is_finite() { 1.0 / m } else { 0.0 };
            for x in b.iter_mut() {
                *x = if x.is_finite() { *x * s } else { 1.0 };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> SymTridiagonal {
        SymTridiagonal { d: vec![2.0; n], e: vec![-1.0; n - 1] }
    }

    #[test]
    fn bisection_matches_closed_form() {
        let n = 50;
        let t = laplacian(n);
        let vals = t.smallest_eigenvalues(6);
        for (j, v) in vals.iter().enumerate() {
            let th = (j + 1) as f64 * core::f64::consts::PI / (n + 1) as f64;
            let exact = 2.0 - 2.0 * libm::cos(th);
            assert!((v - exact).abs() < 1e-14, "{v} vs {exact}");
        }
    }

    #[test]
    fn inverse_iteration_vectors() {
        let n = 400;
        let t = SymTridiagonal { d: (0..n).map(|i| 2.0 + (i as f64 * 0.01).powi(2)).collect(), e: vec![-1.0; n - 1] };
        let vals = t.smallest_eigenvalues(8);
        let mut prev: Vec<(f64, Vec<f64>)> = Vec::new();
        for &lam in &vals {
            let v = t.eigenvector(lam, &prev);
            let mut y = vec![0.0; n];
            t.matvec(&v, &mut y);
            let r: f64 = libm::sqrt(y.iter().zip(&v).map(|(a, b)| (a - lam * b).powi(2)).sum());
            assert!(r < 1e-11, "residual {r}");
            for (_, u) in &prev {
                assert!(dot(u, &v).abs() < 1e-10);
            }
            prev.push((lam, v));
        }
    }

    #[test]
    fn sturm_count_brackets() {
        let t = laplacian(10);
        assert_eq!(t.sturm_count(-1.0), 0);
        assert_eq!(t.sturm_count(5.0), 10);
        assert_eq!(t.sturm_count(2.0 + 1e-9), 5);
    }
}
