//! Resolves an experiment config into a concrete model and spectrum.

use driftlap_core::bounds::{ricci_soliton_c, ConstantsBundle};
use driftlap_core::eigensolve::refine_and_extrapolate;
use driftlap_core::model_space::WeightKind;
use driftlap_core::oracles::{
    box_spectrum, interval_spectrum, ou_spectrum, point_spectrum, product_spectrum, sphere_spectrum, torus_spectrum,
};
use driftlap_core::{Domain, GeometrySpec, SolverConfig, Spectrum, WeightFunction};
use serde_json::json;

use crate::cache::{cache_key, SpectrumCache};
use crate::config::{ExperimentConfig, OracleSpec, SourceSpec};
use crate::error::{LabError, Result};
use crate::expr::values;

/// Spectrum entries requested beyond `k_max`, enough for `λ_{k_max+1}` under
/// either index base plus a margin against split clusters.
const EXTRA_EIGENVALUES: usize = 3;

#[derive(Debug, Clone)]
pub struct Model {
    pub domain: Option<Domain>,
    pub weight: WeightFunction,
    pub geometry: GeometrySpec,
    /// `Err` carries the reason the constants could not be derived.
    pub bundle: std::result::Result<ConstantsBundle, String>,
    /// Euclidean factor dimension, used by the product bound.
    pub euclidean_dim: usize,
}

impl Model {
    pub fn n(&self) -> usize {
        self.geometry.n
    }

    pub fn bundle(&self) -> Result<&ConstantsBundle> {
        self.bundle.as_ref().map_err(|e| LabError::Config(e.clone()))
    }

    /// Offset constant of the Ricci-soliton route.
    pub fn ricci_c(&self) -> Result<f64> {
        let b = self.bundle()?;
        match (&self.domain, self.weight.kind()) {
            (Some(d), _) => Ok(b.ricci_c(d, &self.weight)?),
            (None, WeightKind::Constant(v)) => Ok(ricci_soliton_c(b.rho, (*v, *v), *v, b.s_min, b.h2_max, b.n)),
            (None, _) => Err(LabError::Config("the soliton constant needs a domain for non-constant weights".into())),
        }
    }
}

fn oracle_domain(o: &OracleSpec) -> Result<Option<Domain>> {
    Ok(match o {
        OracleSpec::Interval { length } => Some(Domain::interval(0.0, length.value()?)?),
        OracleSpec::Box { lengths } => {
            let hi = values(lengths)?;
            Some(Domain::box_domain(vec![0.0; hi.len()], hi)?)
        }
        OracleSpec::Torus { periods } => Some(Domain::torus(values(periods)?)?),
        _ => None,
    })
}

fn add_geometry(a: GeometrySpec, b: GeometrySpec) -> Result<GeometrySpec> {
    Ok(GeometrySpec::new(
        a.n + b.n,
        a.p + b.p,
        a.mean_curv_sq_max + b.mean_curv_sq_max,
        (a.pos_vec_sq_range.0 + b.pos_vec_sq_range.0, a.pos_vec_sq_range.1 + b.pos_vec_sq_range.1),
        a.scalar_curv_min + b.scalar_curv_min,
        0.0,
    )?)
}

/// Reference geometry of an oracle model; `None` for the point.
fn oracle_geometry(o: &OracleSpec) -> Result<Option<GeometrySpec>> {
    if let Some(d) = oracle_domain(o)? {
        return Ok(Some(GeometrySpec::reference(&d)?));
    }
    Ok(match o {
        OracleSpec::Sphere { m, radius } => Some(GeometrySpec::round_sphere(*m, radius.value()?)?),
        OracleSpec::Ou { dim, .. } => Some(GeometrySpec::flat(*dim, (0.0, f64::INFINITY))?),
        OracleSpec::Point => None,
        OracleSpec::Product { left, right } => match (oracle_geometry(left)?, oracle_geometry(right)?) {
            (Some(a), Some(b)) => Some(add_geometry(a, b)?),
            (a, b) => a.or(b),
        },
        _ => unreachable!("flat oracles have a domain"),
    })
}

/// Dimension of the weighted Euclidean factor of an oracle model.
fn oracle_euclidean_dim(o: &OracleSpec) -> usize {
    match o {
        OracleSpec::Interval { .. } => 1,
        OracleSpec::Box { lengths } => lengths.len(),
        OracleSpec::Torus { periods } => periods.len(),
        OracleSpec::Ou { dim, .. } => *dim,
        OracleSpec::Sphere { .. } | OracleSpec::Point => 0,
        OracleSpec::Product { left, right } => oracle_euclidean_dim(left) + oracle_euclidean_dim(right),
    }
}

fn oracle_weight(o: &OracleSpec) -> Result<Option<WeightFunction>> {
    Ok(match o {
        OracleSpec::Ou { dim, coeff } => Some(WeightFunction::quadratic(*dim, coeff.value()?)),
        OracleSpec::Product { left, right } => match (oracle_weight(left)?, oracle_weight(right)?) {
            (Some(w), None) | (None, Some(w)) => Some(w),
            (None, None) => None,
            (Some(_), Some(_)) => return Err(LabError::Config("at most one weighted oracle factor".into())),
        },
        _ => None,
    })
}

pub fn build_model(e: &ExperimentConfig) -> Result<Model> {
    let oracle = match &e.source {
        SourceSpec::Oracle(o) => Some(o),
        SourceSpec::Solve(_) => None,
    };
    let domain = match (&e.domain, oracle) {
        (Some(d), _) => Some(d.build()?),
        (None, Some(o)) => oracle_domain(o)?,
        (None, None) => None,
    };
    let euclidean_dim = match (&domain, oracle) {
        (Some(d), _) => d.euclidean_dimension(),
        (None, Some(o)) => oracle_euclidean_dim(o),
        (None, None) => 0,
    };
    let weight = match (&e.weight, oracle) {
        (Some(w), _) => w.build(euclidean_dim.max(1))?,
        (None, Some(o)) => oracle_weight(o)?.unwrap_or_else(|| WeightFunction::constant(euclidean_dim.max(1), 0.0)),
        (None, None) => WeightFunction::constant(euclidean_dim.max(1), 0.0),
    };
    let base = match (&domain, oracle) {
        (Some(d), _) => Some(GeometrySpec::reference(d)?),
        (None, Some(o)) => oracle_geometry(o)?,
        (None, None) => None,
    };
    let geometry = e.geometry.clone().unwrap_or_default().apply(base)?;

    let derived = match &domain {
        Some(d) => ConstantsBundle::from_model(d, &weight, &geometry).map_err(|err| err.to_string()),
        None => {
            let mut b = ConstantsBundle::flat(geometry.n).with_codimension(geometry.p);
            b.h2_max = geometry.mean_curv_sq_max;
            b.s_min = geometry.scalar_curv_min;
            b.xsq_range = geometry.pos_vec_sq_range;
            b.rho = geometry.soliton_rho;
            match weight.kind() {
                WeightKind::Constant(v) => {
                    b.c = 0.25 * geometry.mean_curv_sq_max;
                    b.c_bar = *v;
                }
                _ => {
                    b.c = f64::NAN;
                    b.grad_f_max = f64::INFINITY;
                    b.grad_f_sq_max = f64::INFINITY;
                }
            }
            Ok(b)
        }
    };
    let bundle = match derived {
        Ok(b) => apply_overrides(e, b),
        Err(reason) => Err(reason),
    };
    Ok(Model { domain, weight, geometry, bundle, euclidean_dim })
}

fn apply_overrides(e: &ExperimentConfig, b: ConstantsBundle) -> std::result::Result<ConstantsBundle, String> {
    let undefined_c = !b.c.is_finite();
    let mut b = b;
    if undefined_c {
        // validation rejects a NaN offset; restore it unless overridden
        b.c = 0.0;
    }
    let mut out = e.constants.apply(b).map_err(|err| err.to_string())?;
    if undefined_c && e.constants.c.is_none() {
        out.c = f64::NAN;
    }
    Ok(out)
}

pub fn oracle_spectrum(o: &OracleSpec, k: usize) -> Result<Spectrum> {
    Ok(match o {
        OracleSpec::Interval { length } => interval_spectrum(length.value()?, k)?,
        OracleSpec::Box { lengths } => box_spectrum(&values(lengths)?, k)?,
        OracleSpec::Torus { periods } => torus_spectrum(&values(periods)?, k)?,
        OracleSpec::Sphere { m, radius } => sphere_spectrum(*m, radius.value()?, k)?,
        OracleSpec::Ou { dim, coeff } => ou_spectrum(*dim, coeff.value()?, k)?,
        OracleSpec::Point => point_spectrum(),
        OracleSpec::Product { left, right } => {
            product_spectrum(&oracle_spectrum(left, k)?, &oracle_spectrum(right, k)?, k)?
        }
    })
}

pub fn requested_eigenvalues(e: &ExperimentConfig) -> usize {
    e.k_max + EXTRA_EIGENVALUES
}

pub struct Acquired {
    pub spectrum: Spectrum,
    pub cache_hit: bool,
    pub cache_key: Option<String>,
}

/// Solves (or loads from the cache) or evaluates the oracle for `e`.
pub fn acquire_spectrum(
    e: &ExperimentConfig,
    model: &Model,
    seed: u64,
    cache: Option<&SpectrumCache>,
) -> Result<Acquired> {
    let k = requested_eigenvalues(e);
    let solve = match &e.source {
        SourceSpec::Oracle(o) => {
            let mut s = oracle_spectrum(o, k)?;
            s.descriptor.label = e.id.clone();
            return Ok(Acquired { spectrum: s, cache_hit: false, cache_key: None });
        }
        SourceSpec::Solve(s) => s,
    };
    let domain = model.domain.as_ref().ok_or_else(|| LabError::Config("solve sources need a domain".into()))?;
    let points = solve.points_for(domain.euclidean_dimension())?;
    let cfg: SolverConfig = e.solver.build(k, seed);
    let key = cache_key(&json!({
        "domain": domain,
        "weight": model.weight,
        "base_points": points,
        "levels": solve.levels,
        "route": solve.route,
        "solver": cfg,
    }))?;
    if let Some(c) = cache {
        match c.load(&key) {
            Ok(Some(s)) => return Ok(Acquired { spectrum: s, cache_hit: true, cache_key: Some(key) }),
            // entries written by another format version are refused and recomputed
            Ok(None) | Err(LabError::CacheFormat { .. }) => {}
            Err(err) => return Err(err),
        }
    }
    let mut s = refine_and_extrapolate(domain, &model.weight, &points, solve.levels, solve.route, &cfg)?;
    s.descriptor.label = e.id.clone();
    if let Some(c) = cache {
        c.store(&key, &s)?;
    }
    Ok(Acquired { spectrum: s, cache_hit: false, cache_key: Some(key) })
}
