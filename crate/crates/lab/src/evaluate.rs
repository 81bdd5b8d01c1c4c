//! Dispatch from suite entries to the bound evaluators.

use driftlap_core::bounds::{
    conjecture_check, default_c0, gaussian_gap_check, hile_protter_check, ppw_check, product_gap_check,
    recursion_audit, ricci_soliton_gap_check, self_shrinker_c, self_shrinker_gap_check, thm11_gap_check,
    yang_first_check, yang_second_check, zlz_upper_check, BoundCheck, GapExponent,
};
use driftlap_core::Spectrum;

use crate::config::SuiteEntry;
use crate::error::{LabError, Result};
use crate::model::Model;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluator {
    Ppw,
    HileProtter,
    YangFirst,
    YangSecond,
    Recursion,
    ZlzUpper,
    Thm11Gap,
    GaussianGap,
    SelfShrinkerGap,
    RicciSolitonGap,
    ProductGap,
    Conjecture,
}

impl Evaluator {
    pub const ALL: [Evaluator; 12] = [
        Evaluator::Ppw,
        Evaluator::HileProtter,
        Evaluator::YangFirst,
        Evaluator::YangSecond,
        Evaluator::Recursion,
        Evaluator::ZlzUpper,
        Evaluator::Thm11Gap,
        Evaluator::GaussianGap,
        Evaluator::SelfShrinkerGap,
        Evaluator::RicciSolitonGap,
        Evaluator::ProductGap,
        Evaluator::Conjecture,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Evaluator::Ppw => "ppw",
            Evaluator::HileProtter => "hp",
            Evaluator::YangFirst => "yang1",
            Evaluator::YangSecond => "yang2",
            Evaluator::Recursion => "recursion",
            Evaluator::ZlzUpper => "zlz_upper",
            Evaluator::Thm11Gap => "thm11_gap",
            Evaluator::GaussianGap => "gaussian_gap",
            Evaluator::SelfShrinkerGap => "self_shrinker_gap",
            Evaluator::RicciSolitonGap => "ricci_soliton_gap",
            Evaluator::ProductGap => "product_gap",
            Evaluator::Conjecture => "conjecture",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }

    /// Conjecture verdicts are reported but never asserted.
    pub fn asserted(self) -> bool {
        self != Evaluator::Conjecture
    }
}

/// Whether a check record counts toward the exit status.
pub fn is_asserted(check_name: &str) -> bool {
    check_name != Evaluator::Conjecture.name()
}

fn shift(entry: &SuiteEntry, model: &Model) -> Result<f64> {
    let c = match entry.scalar("c")? {
        Some(c) => c,
        None => model.bundle()?.c,
    };
    if !c.is_finite() {
        return Err(LabError::Config(format!(
            "{}: the offset c is undefined for this model; set it in the suite entry or constants",
            entry.name()
        )));
    }
    Ok(c)
}

fn per_k(k_max: usize, mut f: impl FnMut(usize) -> driftlap_core::Result<BoundCheck>) -> Result<Vec<BoundCheck>> {
    (1..=k_max).map(|k| f(k).map_err(LabError::from)).collect()
}

/// Runs one suite entry for `k = 1..=k_max`.
pub fn evaluate(entry: &SuiteEntry, s: &Spectrum, model: &Model, k_max: usize) -> Result<Vec<BoundCheck>> {
    let which = Evaluator::from_name(entry.name())
        .ok_or_else(|| LabError::Config(format!("unknown evaluator {:?}", entry.name())))?;
    let n = model.n();
    let exponent = entry.exponent()?.unwrap_or_else(|| GapExponent::default_for(s));
    match which {
        Evaluator::Ppw => {
            let c = shift(entry, model)?;
            per_k(k_max, |k| ppw_check(s, n, k, c))
        }
        Evaluator::HileProtter => {
            let c = shift(entry, model)?;
            per_k(k_max, |k| hile_protter_check(s, n, k, c))
        }
        Evaluator::YangFirst => {
            let c = shift(entry, model)?;
            per_k(k_max, |k| yang_first_check(s, n, k, c))
        }
        Evaluator::YangSecond => {
            let c = shift(entry, model)?;
            per_k(k_max, |k| yang_second_check(s, n, k, c))
        }
        Evaluator::Recursion => {
            let c = shift(entry, model)?;
            let mut out = Vec::new();
            for r in recursion_audit(s, n, c)?.into_iter().take(k_max) {
                out.push(r.nonneg);
                out.extend(r.premise);
                out.extend(r.step);
            }
            Ok(out)
        }
        Evaluator::ZlzUpper => {
            let c = shift(entry, model)?;
            let c0 = match entry.scalar("c0")? {
                Some(v) => v,
                None => model.bundle.as_ref().map_or(default_c0(n), |b| b.c0),
            };
            per_k(k_max, |k| zlz_upper_check(s, n, k, c, c0))
        }
        Evaluator::Thm11Gap => {
            let mut b = model.bundle()?.clone();
            b.c = shift(entry, model)?;
            per_k(k_max, |k| thm11_gap_check(s, &b, k, exponent))
        }
        Evaluator::GaussianGap => {
            let min_xsq = entry.scalar("min_xsq")?.unwrap_or(model.geometry.pos_vec_sq_range.0);
            per_k(k_max, |k| gaussian_gap_check(s, n, k, min_xsq))
        }
        Evaluator::SelfShrinkerGap => {
            let mut b = model.bundle()?.clone();
            b.c = entry.scalar("c")?.unwrap_or_else(|| self_shrinker_c(&model.geometry));
            per_k(k_max, |k| self_shrinker_gap_check(s, &b, k, exponent))
        }
        Evaluator::RicciSolitonGap => {
            let mut b = model.bundle()?.clone();
            b.c = match entry.scalar("c")? {
                Some(c) => c,
                None => model.ricci_c()?,
            };
            per_k(k_max, |k| ricci_soliton_gap_check(s, &b, k, exponent))
        }
        Evaluator::ProductGap => {
            let m = match entry.usize_param("m")? {
                Some(m) => m,
                None if model.euclidean_dim > 0 => model.euclidean_dim,
                None => return Err(LabError::Config("product_gap needs m for models without a flat factor".into())),
            };
            let b = model.bundle()?;
            let c0 = entry.scalar("c0")?.unwrap_or_else(|| default_c0(m));
            per_k(k_max, |k| product_gap_check(s, m, k, b.grad_f_max, b.grad_f_sq_max, c0))
        }
        Evaluator::Conjecture => Ok(conjecture_check(s, n, k_max)?.checks),
    }
}
