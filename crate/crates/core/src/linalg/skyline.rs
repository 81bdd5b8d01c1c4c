//! Envelope (skyline) Cholesky factorization of sparse SPD matrices.

use alloc::vec;
use alloc::vec::Vec;

use crate::discretize::SparseSymmetricOperator;
use crate::error::{Error, Result};

/// Lower Cholesky factor `L` of `A − σI` in envelope storage: row `i`
/// holds columns `first[i]..=i` contiguously.
#[derive(Debug, Clone)]
pub struct SkylineCholesky {
    first: Vec<usize>,
    start: Vec<usize>,
    values: Vec<f64>,
}

impl SkylineCholesky {
    /// Factors `op − shift·I`. Fails if a pivot is not strictly positive.
    pub fn factor(op: &SparseSymmetricOperator, shift: f64) -> Result<Self> {
        let n = op.dimension();
        let mut first = vec![0usize; n];
        let mut start = vec![0usize; n + 1];
        for i in 0..n {
            let f = op.row(i).0.iter().copied().filter(|&j| j <= i).min().unwrap_or(i);
            first[i] = f;
            start[i + 1] = start[i] + (i - f + 1);
        }
        let mut values = vec![0.0; start[n]];
        for i in 0..n {
            let (cols, vals) = op.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if j <= i {
                    values[start[i] + j - first[i]] = if j == i { v - shift } else { v };
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            let si = start[i];
            for j in fi..i {
                let fj = first[j];
                let sj = start[j];
                let k0 = fi.max(fj);
                let len = j - k0;
                let ri = &values[si + k0 - fi..si + k0 - fi + len];
                let rj = &values[sj + k0 - fj..sj + k0 - fj + len];
                let s: f64 = ri.iter().zip(rj).map(|(a, b)| a * b).sum();
                let ljj = values[sj + j - fj];
                values[si + j - fi] = (values[si + j - fi] - s) / ljj;
            }
            let row = &values[si..si + i - fi];
            let s: f64 = row.iter().map(|a| a * a).sum();
            let piv = values[si + i - fi] - s;
            if !(piv > 0.0) || !piv.is_finite() {
                return Err(Error::InvalidArgument("shifted operator is not positive definite"));
            }
            values[si + i - fi] = libm::sqrt(piv);
        }
        Ok(Self { first, start, values })
    }

    pub fn dimension(&self) -> usize {
        self.first.len()
    }

    /// Stored entries of the factor.
    pub fn envelope_size(&self) -> usize {
        self.values.len()
    }

    /// Overwrites `b` with `(A − σI)^{-1} b`.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.dimension();
        for i in 0..n {
            let fi = self.first[i];
            let si = self.start[i];
            let row = &self.values[si..si + i - fi];
            let s: f64 = row.iter().zip(&b[fi..i]).map(|(a, x)| a * x).sum();
            b[i] = (b[i] - s) / self.values[si + i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let si = self.start[i];
            b[i] /= self.values[si + i - fi];
            let xi = b[i];
            let row = &self.values[si..si + i - fi];
            for (bk, a) in b[fi..i].iter_mut().zip(row) {
                *bk -= a * xi;
            }
        }
    }
}
