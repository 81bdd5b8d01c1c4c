//! Recursion for `F_k = (1 + 2/n)Λ_k² − T_k` and the explicit upper bound
//! it yields.

use alloc::vec::Vec;

use super::{propagate, universal::yang1_sides, BoundCheck};
use crate::eigensolve::Spectrum;
use crate::error::{Error, Result};

/// `C(n, k) = 1 − (1/(3n)) (k/(k+1))^{4/n} (1 + 2/n)(1 + 4/n) / (k+1)³`.
pub fn recursion_constant(n: usize, k: usize) -> f64 {
    let n = n as f64;
    let k = k as f64;
    let ratio = libm::pow(k / (k + 1.0), 4.0 / n);
    let k1 = k + 1.0;
    1.0 - ratio * (1.0 + 2.0 / n) * (1.0 + 4.0 / n) / (3.0 * n * k1 * k1 * k1)
}

/// `C₀(λ₁ + c) k^{2/n} − c`.
pub fn cheng_yang_upper(lambda1: f64, n: usize, k: usize, c: f64, c0: f64) -> f64 {
    c0 * (lambda1 + c) * libm::pow(k as f64, 2.0 / n as f64) - c
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursionState {
    /// Number of terms `K` of the shifted sequence.
    pub k: usize,
    /// `Λ_K = (1/K) Σ μ_i`.
    pub lambda_mean: f64,
    /// `T_K = (1/K) Σ μ_i²`.
    pub t_mean: f64,
    pub f: f64,
}

impl RecursionState {
    fn of(mu: &[f64], n: usize) -> Self {
        let k = mu.len();
        let lambda_mean = mu.iter().sum::<f64>() / k as f64;
        let t_mean = mu.iter().map(|m| m * m).sum::<f64>() / k as f64;
        let f = (1.0 + 2.0 / n as f64) * lambda_mean * lambda_mean - t_mean;
        Self { k, lambda_mean, t_mean, f }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecursionRecord {
    pub state: RecursionState,
    /// First Yang inequality at `K`, when `μ_{K+1}` is available.
    pub premise: Option<BoundCheck>,
    /// `0 ≤ F_K`.
    pub nonneg: BoundCheck,
    /// `F_{K+1} ≤ C(n,K) ((K+1)/K)^{4/n} F_K`.
    pub step: Option<BoundCheck>,
    /// `∏_{j<K} C(n,j) ((j+1)/j)^{4/n}`, so that `F_K ≤ growth · F_1`.
    pub growth: f64,
}

fn step_factor(n: usize, k: usize) -> f64 {
    recursion_constant(n, k) * libm::pow((k as f64 + 1.0) / k as f64, 4.0 / n as f64)
}

/// Audits the recursion along the whole list, shifted by `c`. Record `K`
/// covers the first `K` list entries.
pub fn recursion_audit(s: &Spectrum, n: usize, c: f64) -> Result<Vec<RecursionRecord>> {
    if s.is_empty() {
        return Err(Error::InvalidArgument("empty spectrum"));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive"));
    }
    let mu: Vec<f64> = s.eigenvalues.iter().map(|v| v + c).collect();
    let u = &s.uncertainties;
    let len = mu.len();
    let mut out = Vec::with_capacity(len);
    let mut growth = 1.0;
    for big_k in 1..=len {
        let state = RecursionState::of(&mu[..big_k], n);
        let nonneg = {
            let spread = propagate(&mu[..big_k], &u[..big_k], |w| -RecursionState::of(w, n).f);
            BoundCheck::new("recursion_nonneg", big_k, 0.0, state.f, spread)
        };
        let (premise, step) = if big_k < len {
            let raw = &s.eigenvalues[..=big_k];
            let (lhs, rhs) = yang1_sides(raw, n, c);
            let spread = propagate(raw, &u[..=big_k], |w| {
                let (l, r) = yang1_sides(w, n, c);
                l - r
            });
            let premise = BoundCheck::new("recursion_premise", big_k, lhs, rhs, spread);
            let factor = step_factor(n, big_k);
            let next = RecursionState::of(&mu[..=big_k], n);
            let spread = propagate(&mu[..=big_k], &u[..=big_k], |w| {
                RecursionState::of(w, n).f - factor * RecursionState::of(&w[..big_k], n).f
            });
            (Some(premise), Some(BoundCheck::new("recursion_step", big_k, next.f, factor * state.f, spread)))
        } else {
            (None, None)
        };
        out.push(RecursionRecord { state, premise, nonneg, step, growth });
        growth *= step_factor(n, big_k);
    }
    Ok(out)
}
