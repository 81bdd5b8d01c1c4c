//! Explicit constants `c` entering the shifted inequalities.

use alloc::vec;

use super::ConstantsBundle;
use crate::error::{Error, Result};
use crate::model_space::{weighted_mean_of_f, Domain, GeometrySpec, WeightFunction, WeightKind};
use crate::util::next_index;

/// Range of `c·t² + d·t` for `t ∈ [l, h]`.
fn quadratic_range(c: f64, d: f64, l: f64, h: f64) -> (f64, f64) {
    let q = |t: f64| c * t * t + d * t;
    let (mut lo, mut hi) = (q(l).min(q(h)), q(l).max(q(h)));
    if c != 0.0 {
        let v = -d / (2.0 * c);
        if v > l && v < h {
            lo = lo.min(q(v));
            hi = hi.max(q(v));
        }
    }
    (lo, hi)
}

/// Visits every table node inside the closed flat extent of `domain`.
fn for_table_nodes(domain: &Domain, f: &WeightFunction, mut visit: impl FnMut(&[f64]) -> Result<()>) -> Result<()> {
    let WeightKind::Tabulated(t) = f.kind() else {
        return Err(Error::InvalidArgument("not a tabulated weight"));
    };
    let (lo, hi) = domain.euclidean_part().extent();
    let counts = t.counts().to_vec();
    let mut idx = vec![0usize; counts.len()];
    let mut seen = false;
    loop {
        let x = t.node(&idx);
        let inside = x.iter().enumerate().all(|(a, v)| {
            let slack = 1e-12 * (hi[a] - lo[a]);
            *v >= lo[a] - slack && *v <= hi[a] + slack
        });
        if inside {
            seen = true;
            visit(&x)?;
        }
        if !next_index(&mut idx, &counts) {
            break;
        }
    }
    if seen {
        Ok(())
    } else {
        Err(Error::InvalidArgument("no table node lies inside the domain"))
    }
}

fn check_dims(domain: &Domain, f: &WeightFunction) -> Result<()> {
    let n = domain.euclidean_dimension();
    if f.dimension() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.dimension() });
    }
    Ok(())
}

/// `(min, max)` of `|∇f|²` over the flat factor; exact for analytic weights,
/// sampled at table nodes otherwise.
pub fn gradient_sq_range(domain: &Domain, f: &WeightFunction) -> Result<(f64, f64)> {
    check_dims(domain, f)?;
    if let Some((a, b, _)) = f.affine_parts() {
        let (lo, hi) = domain.euclidean_part().extent();
        let mut min = 0.0;
        let mut max = 0.0;
        for i in 0..lo.len() {
            let gl = 2.0 * a * lo[i] + b[i];
            let gh = 2.0 * a * hi[i] + b[i];
            min += if gl * gh <= 0.0 { 0.0 } else { (gl * gl).min(gh * gh) };
            max += (gl * gl).max(gh * gh);
        }
        return Ok((min, max));
    }
    let mut range = (f64::INFINITY, f64::NEG_INFINITY);
    for_table_nodes(domain, f, |x| {
        let s = f.drift_quantities(x)?.grad_f_sq;
        range = (range.0.min(s), range.1.max(s));
        Ok(())
    })?;
    Ok(range)
}

/// `(min, max)` of `f` over the flat factor.
pub(crate) fn potential_range(domain: &Domain, f: &WeightFunction) -> Result<(f64, f64)> {
    check_dims(domain, f)?;
    if let Some((a, b, offset)) = f.affine_parts() {
        let (lo, hi) = domain.euclidean_part().extent();
        let mut range = (offset, offset);
        for i in 0..lo.len() {
            let (l, h) = quadratic_range(a, b[i], lo[i], hi[i]);
            range = (range.0 + l, range.1 + h);
        }
        return Ok(range);
    }
    let mut range = (f64::INFINITY, f64::NEG_INFINITY);
    for_table_nodes(domain, f, |x| {
        let v = f.eval_potential(x)?;
        range = (range.0.min(v), range.1.max(v));
        Ok(())
    })?;
    Ok(range)
}

/// `c = ¼ max (n²H² + 2|Δf − |∇f|²| + |∇f|²)` over the domain.
///
/// For analytic weights `Δf` is constant and the expression is convex in
/// `|∇f|²`, so the exact range endpoints suffice. Tabulated weights are
/// sampled at their nodes and need derivative tables.
pub fn constant_c_general(domain: &Domain, f: &WeightFunction, geom: &GeometrySpec) -> Result<f64> {
    check_dims(domain, f)?;
    let h2 = geom.mean_curv_sq_max;
    let expr = |lap: f64, s: f64| h2 + 2.0 * (lap - s).abs() + s;
    if let Some((a, _, _)) = f.affine_parts() {
        let lap = 2.0 * a * f.dimension() as f64;
        let (smin, smax) = gradient_sq_range(domain, f)?;
        return Ok(0.25 * expr(lap, smin).max(expr(lap, smax)));
    }
    let mut best = f64::NEG_INFINITY;
    for_table_nodes(domain, f, |x| {
        let d = f.drift_quantities(x)?;
        best = best.max(expr(d.lap_f, d.grad_f_sq));
        Ok(())
    })?;
    Ok(0.25 * best)
}

/// `c = ¼ max (n²H² + |2n − |X|²| + |X|²)` over the `|X|²` range.
pub fn self_shrinker_c(geom: &GeometrySpec) -> f64 {
    let two_n = 2.0 * geom.n as f64;
    let expr = |t: f64| geom.mean_curv_sq_max + (two_n - t).abs() + t;
    let (lo, hi) = geom.pos_vec_sq_range;
    0.25 * expr(lo).max(expr(hi))
}

/// `c = ¼ max (n²H² + 4|ρf − ρc̄| + 2ρf + nρ − 2ρc̄ − S)` over the range of `f`.
pub fn ricci_soliton_c(rho: f64, f_range: (f64, f64), c_bar: f64, s_min: f64, h2_max: f64, n: usize) -> f64 {
    let expr = |f: f64| {
        h2_max + 4.0 * (rho * f - rho * c_bar).abs() + 2.0 * rho * f + n as f64 * rho - 2.0 * rho * c_bar - s_min
    };
    0.25 * expr(f_range.0).max(expr(f_range.1))
}

fn quadrature_resolution(n: usize) -> usize {
    match n {
        1 => 2048,
        2 => 256,
        3 => 48,
        _ => 12,
    }
}

impl ConstantsBundle {
    /// Derives every constant from a model domain, weight and immersion, with
    /// unit `α_j`, `b_j`, `β` and `C₀ = 1 + 4/n`.
    pub fn from_model(domain: &Domain, f: &WeightFunction, geom: &GeometrySpec) -> Result<Self> {
        if geom.n != domain.dimension() {
            return Err(Error::DimensionMismatch { expected: domain.dimension(), found: geom.n });
        }
        let c = constant_c_general(domain, f, geom)?;
        let (_, gmax) = gradient_sq_range(domain, f)?;
        let c_bar = weighted_mean_of_f(domain, f, quadrature_resolution(domain.euclidean_dimension()))?;
        let mut b = Self::flat(geom.n).with_codimension(geom.p).with_c(c);
        b.c_bar = c_bar;
        b.rho = geom.soliton_rho;
        b.h2_max = geom.mean_curv_sq_max;
        b.s_min = geom.scalar_curv_min;
        b.xsq_range = geom.pos_vec_sq_range;
        b.grad_f_sq_max = gmax;
        b.grad_f_max = libm::sqrt(gmax);
        b.validate()?;
        Ok(b)
    }

    /// The constant of the Ricci-soliton route for this bundle and weight.
    pub fn ricci_c(&self, domain: &Domain, f: &WeightFunction) -> Result<f64> {
        let range = potential_range(domain, f)?;
        Ok(ricci_soliton_c(self.rho, range, self.c_bar, self.s_min, self.h2_max, self.n))
    }
}
