//! Eigenvalue inequalities, explicit constants and gap bounds evaluated on
//! a [`Spectrum`](crate::Spectrum).
//!
//! Every check is normalized to the form `lhs ≤ rhs`. Checks on closed
//! spectra (index base 0) treat the list as the sequence `μ₁ = λ̄₀, μ₂ = λ̄₁, …`,
//! so a check at index `k` involves `k + 1 − base` terms.

mod constants;
mod gaps;
mod recursion;
mod universal;

use alloc::vec;
use alloc::vec::Vec;

use crate::eigensolve::Spectrum;
use crate::error::{Error, Result};

pub use constants::{constant_c_general, gradient_sq_range, ricci_soliton_c, self_shrinker_c};
pub use gaps::{
    conjecture_check, gap_bound_ricci, gap_bound_thm11, gaussian_gap_check, gaussian_soliton_gap, product_gap_check,
    product_manifold_c2, product_manifold_gap, ricci_soliton_gap_check, self_shrinker_gap_check, thm11_gap_check,
    ConjectureReport, GapExponent,
};
pub use recursion::{cheng_yang_upper, recursion_audit, recursion_constant, RecursionRecord, RecursionState};
pub use universal::{hile_protter_check, ppw_check, yang_first_check, yang_second_check, zlz_upper_check};

/// Names of the check-producing evaluators, as selected from configs.
pub const EVALUATOR_NAMES: [&str; 12] = [
    "ppw",
    "hp",
    "yang1",
    "yang2",
    "recursion",
    "zlz_upper",
    "thm11_gap",
    "gaussian_gap",
    "self_shrinker_gap",
    "ricci_soliton_gap",
    "product_gap",
    "conjecture",
];

/// Relative band absorbing floating-point roundoff in equality cases.
pub const ROUNDOFF_BAND: f64 = 1e-12;

/// The Cheng–Yang constant surrogate `C₀(n) = 1 + 4/n`.
pub fn default_c0(n: usize) -> f64 {
    1.0 + 4.0 / n as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    /// `lhs ≤ rhs − u`.
    HoldsStrictly,
    /// `lhs ≤ rhs + u` but not strictly.
    Holds,
    Violated,
    /// A side is NaN.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::HoldsStrictly => "holds_strictly",
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    pub fn holds(self) -> bool {
        matches!(self, Verdict::Holds | Verdict::HoldsStrictly)
    }
}

/// One evaluated inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub slack: f64,
    /// Propagated spectrum uncertainty plus the roundoff band.
    pub uncertainty: f64,
    pub verdict: Verdict,
}

impl BoundCheck {
    pub fn new(name: &'static str, k: usize, lhs: f64, rhs: f64, propagated: f64) -> Self {
        let scale = [lhs.abs(), rhs.abs()].into_iter().filter(|v| v.is_finite()).fold(0.0, f64::max);
        let uncertainty = if propagated.is_finite() { propagated } else { 0.0 } + ROUNDOFF_BAND * scale;
        let verdict = if lhs.is_nan() || rhs.is_nan() {
            Verdict::Inconclusive
        } else if lhs <= rhs - uncertainty {
            Verdict::HoldsStrictly
        } else if lhs <= rhs + uncertainty {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
        Self { name, k, lhs, rhs, slack: rhs - lhs, uncertainty, verdict }
    }

    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }
}

/// First-order spread of `g = lhs − rhs` under independent perturbations
/// `values[i] ± uncs[i]`.
pub(crate) fn propagate(values: &[f64], uncs: &[f64], g: impl Fn(&[f64]) -> f64) -> f64 {
    let mut v = values.to_vec();
    let mut total = 0.0;
    for i in 0..values.len() {
        let u = uncs[i];
        if u == 0.0 {
            continue;
        }
        v[i] = values[i] + u;
        let up = g(&v);
        v[i] = values[i] - u;
        let down = g(&v);
        v[i] = values[i];
        let d = 0.5 * (up - down).abs();
        if d.is_finite() {
            total += d;
        }
    }
    total
}

/// The first `k + 2 − base` list entries, i.e. `λ_base..=λ_{k+1}`, and
/// their uncertainties.
pub(crate) fn prefix(s: &Spectrum, k: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if k < 1 {
        return Err(Error::InvalidArgument("k must be at least 1"));
    }
    let terms = k + 1 - s.index_base;
    if terms + 1 > s.len() {
        return Err(Error::Index { index: k + 1, available: s.len() });
    }
    Ok((s.eigenvalues[..=terms].to_vec(), s.uncertainties[..=terms].to_vec()))
}

/// All geometric constants feeding the bound formulas.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstantsBundle {
    pub n: usize,
    pub p: usize,
    pub c: f64,
    pub c_bar: f64,
    pub c0: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub beta: f64,
    pub b_list: Vec<f64>,
    pub rho: f64,
    pub h2_max: f64,
    pub s_min: f64,
    pub xsq_range: (f64, f64),
    pub grad_f_max: f64,
    pub grad_f_sq_max: f64,
}

impl ConstantsBundle {
    /// Flat defaults: `p = 0`, `c = 0`, `α_j = b_j = β = 1`, `C₀ = 1 + 4/n`.
    pub fn flat(n: usize) -> Self {
        Self {
            n,
            p: 0,
            c: 0.0,
            c_bar: 0.0,
            c0: default_c0(n),
            alpha_min: 1.0,
            alpha_max: 1.0,
            beta: 1.0,
            b_list: vec![1.0; n],
            rho: 0.0,
            h2_max: 0.0,
            s_min: 0.0,
            xsq_range: (0.0, 0.0),
            grad_f_max: 0.0,
            grad_f_sq_max: 0.0,
        }
    }

    /// Sets the codimension and resizes `b_list` to `n + p` unit weights.
    pub fn with_codimension(mut self, p: usize) -> Self {
        self.p = p;
        self.b_list = vec![1.0; self.n + p];
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be positive"));
        }
        if !(self.alpha_min > 0.0 && self.alpha_min <= self.alpha_max) {
            return Err(Error::InvalidArgument("need 0 < α ≤ ᾱ"));
        }
        if !(self.beta >= 0.0) || self.b_list.iter().any(|b| !(*b >= 0.0)) {
            return Err(Error::InvalidArgument("β and every b_j must be nonnegative"));
        }
        if !(self.c0 >= 1.0) {
            return Err(Error::InvalidArgument("C₀ must be at least 1"));
        }
        if !self.c.is_finite() {
            return Err(Error::InvalidArgument("c must be finite"));
        }
        Ok(())
    }
}
