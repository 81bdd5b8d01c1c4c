//! Block shift-and-invert subspace iteration with Rayleigh–Ritz on the
//! original operator and thick restarts.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Eigenpairs, SolverConfig};
use crate::discretize::SparseSymmetricOperator;
use crate::error::{Error, Result};
use crate::linalg::dense::symmetric_eigen;
use crate::linalg::skyline::SkylineCholesky;
use crate::util::{axpy, dot, norm, scale};

const BLOCK: usize = 8;
const FACTOR_ATTEMPTS: usize = 12;

struct Basis {
    q: Vec<Vec<f64>>,
    aq: Vec<Vec<f64>>,
    /// `h[i][j] = q_iᵀ A q_j`.
    h: Vec<Vec<f64>>,
}

impl Basis {
    fn len(&self) -> usize {
        self.q.len()
    }

    /// Orthogonalizes `w` against the basis (two Gram–Schmidt passes) and
    /// appends it unless it is numerically dependent.
    fn push(&mut self, op: &SparseSymmetricOperator, mut w: Vec<f64>) -> bool {
        let n0 = norm(&w);
        if !(n0 > 0.0) || !n0.is_finite() {
            return false;
        }
        scale(1.0 / n0, &mut w);
        for _ in 0..2 {
            for qi in &self.q {
                let c = dot(qi, &w);
                axpy(-c, qi, &mut w);
            }
        }
        let nw = norm(&w);
        if nw < 1e-8 {
            return false;
        }
        scale(1.0 / nw, &mut w);
        let mut aw = vec![0.0; w.len()];
        op.matvec(&w, &mut aw);
        let col: Vec<f64> = self.q.iter().map(|qi| dot(qi, &aw)).collect();
        for (row, c) in self.h.iter_mut().zip(&col) {
            row.push(*c);
        }
        let mut last = col;
        last.push(dot(&w, &aw));
        self.h.push(last);
        self.q.push(w);
        self.aq.push(aw);
        true
    }

    fn combine(vectors: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; vectors[0].len()];
        for (v, c) in vectors.iter().zip(y) {
            if *c != 0.0 {
                axpy(*c, v, &mut out);
            }
        }
        out
    }

    fn ritz(&self) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let m = self.len();
        let mut flat = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                flat[i * m + j] = 0.5 * (self.h[i][j] + self.h[j][i]);
            }
        }
        symmetric_eigen(&flat, m)
    }

    /// Replaces the basis by the Ritz vectors `Y[keep]`.
    fn restart(&mut self, ys: &[Vec<f64>]) {
        let q: Vec<Vec<f64>> = ys.iter().map(|y| Self::combine(&self.q, y)).collect();
        let aq: Vec<Vec<f64>> = ys.iter().map(|y| Self::combine(&self.aq, y)).collect();
        let m = q.len();
        let mut h = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..=i {
                let v = 0.5 * (dot(&q[i], &aq[j]) + dot(&q[j], &aq[i]));
                h[i][j] = v;
                h[j][i] = v;
            }
        }
        self.q = q;
        self.aq = aq;
        self.h = h;
    }
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| ((rng.next_u64() >> 11) as f64) / ((1u64 << 53) as f64) - 0.5).collect()
}

fn factor_below_spectrum(op: &SparseSymmetricOperator) -> Result<SkylineCholesky> {
    let (glo, ghi) = op.gershgorin();
    let mut delta = 1e-2 * (1.0 + glo.abs()).max(1e-12 * ghi.abs());
    let mut last = None;
    for _ in 0..FACTOR_ATTEMPTS {
        match SkylineCholesky::factor(op, glo - delta) {
            Ok(c) => return Ok(c),
            Err(e) => last = Some(e),
        }
        delta *= 10.0;
    }
    Err(last.unwrap_or(Error::InvalidArgument("could not factor shifted operator")))
}

pub(super) fn block_shift_invert(op: &SparseSymmetricOperator, cfg: &SolverConfig) -> Result<Eigenpairs> {
    let n = op.dimension();
    let k = cfg.k;
    let b = BLOCK.min(n - k).max(1);
    let cap = (3 * k).max(k + 4 * b).max(2 * b).min(n);
    let chol = factor_below_spectrum(op)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut basis = Basis { q: Vec::new(), aq: Vec::new(), h: Vec::new() };

    for _ in 0..b {
        let mut w = random_vector(&mut rng, n);
        chol.solve_in_place(&mut w);
        basis.push(op, w);
    }

    let mut work = vec![0.0; n];
    let mut residuals = vec![f64::INFINITY; k];
    for iteration in 1..=cfg.max_iterations {
        let m = basis.len();
        let (theta, ys) = basis.ritz()?;
        let wanted = k.min(m);
        let candidates = (k + b).min(m);
        let mut xs = Vec::with_capacity(candidates);
        let mut rs = Vec::with_capacity(candidates);
        let mut converged = vec![false; candidates];
        for j in 0..candidates {
            let x = Basis::combine(&basis.q, &ys[j]);
            let mut r = Basis::combine(&basis.aq, &ys[j]);
            axpy(-theta[j], &x, &mut r);
            if j < wanted {
                residuals[j] = norm(&r);
                converged[j] = residuals[j] <= 0.5 * cfg.tol;
            }
            xs.push(x);
            rs.push(r);
        }

        if m >= k && converged[..k].iter().all(|c| *c) {
            let mut vectors = Vec::with_capacity(k);
            let mut residual_norms = Vec::with_capacity(k);
            for (j, x) in xs.iter().take(k).enumerate() {
                let mut x = x.clone();
                let nx = norm(&x);
                scale(1.0 / nx, &mut x);
                op.matvec(&x, &mut work);
                let r: f64 = work.iter().zip(&x).map(|(a, v)| (a - theta[j] * v) * (a - theta[j] * v)).sum();
                residual_norms.push(libm::sqrt(r));
                vectors.push(x);
            }
            if residual_norms.iter().all(|r| *r <= cfg.tol) {
                return Ok(Eigenpairs { values: theta[..k].to_vec(), vectors, residual_norms });
            }
        }

        let mut picks: Vec<usize> = (0..wanted).filter(|&j| !converged[j]).take(b).collect();
        let mut extra = wanted;
        while picks.len() < b && extra < candidates {
            picks.push(extra);
            extra += 1;
        }
        let mut directions: Vec<Vec<f64>> = picks
            .iter()
            .map(|&j| {
                // S⁻¹(A − θ)x spans the same space as S⁻¹x modulo x without the cancellation
                let mut w = rs[j].clone();
                chol.solve_in_place(&mut w);
                w
            })
            .collect();
        while directions.len() < b {
            let mut w = random_vector(&mut rng, n);
            chol.solve_in_place(&mut w);
            directions.push(w);
        }

        if m + directions.len() > cap {
            let keep = (k + b).min(m).min(cap - directions.len());
            basis.restart(&ys[..keep]);
        }
        let mut added = 0;
        for w in directions {
            if basis.push(op, w) {
                added += 1;
            }
        }
        if added == 0 {
            let mut w = random_vector(&mut rng, n);
            chol.solve_in_place(&mut w);
            basis.push(op, w);
        }
        if iteration == cfg.max_iterations {
            break;
        }
    }
    Err(Error::Convergence { iterations: cfg.max_iterations, residuals })
}
