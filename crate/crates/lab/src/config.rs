//! JSON experiment configuration.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use driftlap_core::bounds::{ConstantsBundle, GapExponent, EVALUATOR_NAMES};
use driftlap_core::model_space::TabulatedWeight;
use driftlap_core::{Domain, GeometrySpec, Method, Route, SolverConfig, WeightFunction};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::expr::{values, Scalar};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    pub experiments: Vec<ExperimentConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: String,
    #[serde(default)]
    pub domain: Option<DomainSpec>,
    #[serde(default)]
    pub weight: Option<WeightSpec>,
    #[serde(default)]
    pub geometry: Option<GeometryOverride>,
    pub source: SourceSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub constants: ConstantsOverride,
    #[serde(default)]
    pub suite: Vec<SuiteEntry>,
    pub k_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Interval { a: Scalar, b: Scalar },
    Box { lo: Vec<Scalar>, hi: Vec<Scalar> },
    Torus { periods: Vec<Scalar> },
    ProductWithSphere { euclidean: Box<DomainSpec>, sphere_dim: usize, sphere_radius: Scalar },
}

impl DomainSpec {
    pub fn build(&self) -> Result<Domain> {
        Ok(match self {
            DomainSpec::Interval { a, b } => Domain::interval(a.value()?, b.value()?)?,
            DomainSpec::Box { lo, hi } => Domain::box_domain(values(lo)?, values(hi)?)?,
            DomainSpec::Torus { periods } => Domain::torus(values(periods)?)?,
            DomainSpec::ProductWithSphere { euclidean, sphere_dim, sphere_radius } => {
                Domain::product_with_sphere(euclidean.build()?, *sphere_dim, sphere_radius.value()?)?
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    Constant {
        #[serde(default = "zero")]
        value: Scalar,
    },
    Quadratic {
        coeff: Scalar,
    },
    AffineQuadratic {
        coeff: Scalar,
        linear: Vec<Scalar>,
        #[serde(default = "zero")]
        offset: Scalar,
    },
    Tabulated {
        lo: Vec<Scalar>,
        hi: Vec<Scalar>,
        counts: Vec<usize>,
        values: Vec<f64>,
        #[serde(default)]
        gradient: Option<Vec<f64>>,
        #[serde(default)]
        laplacian: Option<Vec<f64>>,
    },
}

fn zero() -> Scalar {
    Scalar::Number(0.0)
}

impl WeightSpec {
    pub fn build(&self, dimension: usize) -> Result<WeightFunction> {
        Ok(match self {
            WeightSpec::Constant { value } => WeightFunction::constant(dimension, value.value()?),
            WeightSpec::Quadratic { coeff } => WeightFunction::quadratic(dimension, coeff.value()?),
            WeightSpec::AffineQuadratic { coeff, linear, offset } => {
                WeightFunction::affine_quadratic(coeff.value()?, values(linear)?, offset.value()?)
            }
            WeightSpec::Tabulated { lo, hi, counts, values: v, gradient, laplacian } => {
                WeightFunction::tabulated(TabulatedWeight::new(
                    values(lo)?,
                    values(hi)?,
                    counts.clone(),
                    v.clone(),
                    gradient.clone(),
                    laplacian.clone(),
                )?)
            }
        })
    }
}

/// Replaces fields of the reference immersion's geometric data.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryOverride {
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub mean_curv_sq_max: Option<Scalar>,
    pub pos_vec_sq_range: Option<(Scalar, Scalar)>,
    pub scalar_curv_min: Option<Scalar>,
    pub soliton_rho: Option<Scalar>,
}

impl GeometryOverride {
    pub fn apply(&self, base: Option<GeometrySpec>) -> Result<GeometrySpec> {
        let n = match (self.n, &base) {
            (Some(n), _) => n,
            (None, Some(b)) => b.n,
            (None, None) => return Err(LabError::Config("geometry needs n when no domain is given".into())),
        };
        let b = base.unwrap_or(GeometrySpec::flat(n, (0.0, 0.0))?);
        let range = match &self.pos_vec_sq_range {
            Some((lo, hi)) => (lo.value()?, hi.value()?),
            None => b.pos_vec_sq_range,
        };
        let opt = |s: &Option<Scalar>, d: f64| s.as_ref().map_or(Ok(d), Scalar::value);
        Ok(GeometrySpec::new(
            n,
            self.p.unwrap_or(b.p),
            opt(&self.mean_curv_sq_max, b.mean_curv_sq_max)?,
            range,
            opt(&self.scalar_curv_min, b.scalar_curv_min)?,
            opt(&self.soliton_rho, b.soliton_rho)?,
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceSpec {
    Solve(SolveSpec),
    Oracle(OracleSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Points {
    Uniform(usize),
    PerAxis(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveSpec {
    pub base_points: Points,
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default)]
    pub route: Route,
}

fn default_levels() -> usize {
    3
}

impl SolveSpec {
    pub fn points_for(&self, dimension: usize) -> Result<Vec<usize>> {
        match &self.base_points {
            Points::Uniform(p) => Ok(vec![*p; dimension]),
            Points::PerAxis(v) if v.len() == dimension => Ok(v.clone()),
            Points::PerAxis(v) => {
                Err(LabError::Config(format!("base_points has {} axes, domain has {dimension}", v.len())))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum OracleSpec {
    Interval { length: Scalar },
    Box { lengths: Vec<Scalar> },
    Torus { periods: Vec<Scalar> },
    Sphere { m: usize, radius: Scalar },
    Ou { dim: usize, coeff: Scalar },
    Point,
    Product { left: Box<OracleSpec>, right: Box<OracleSpec> },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub tol: Option<f64>,
    pub max_iterations: Option<usize>,
    pub method: Option<Method>,
}

impl SolverSpec {
    pub fn build(&self, k: usize, seed: u64) -> SolverConfig {
        let d = SolverConfig::default();
        SolverConfig {
            k,
            tol: self.tol.unwrap_or(d.tol),
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
            rng_seed: seed,
            method: self.method.unwrap_or(d.method),
        }
    }
}

/// Replaces fields of the derived [`ConstantsBundle`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsOverride {
    pub c: Option<Scalar>,
    pub c_bar: Option<Scalar>,
    pub c0: Option<Scalar>,
    pub alpha_min: Option<Scalar>,
    pub alpha_max: Option<Scalar>,
    pub beta: Option<Scalar>,
    pub b_list: Option<Vec<Scalar>>,
    pub rho: Option<Scalar>,
    pub grad_f_max: Option<Scalar>,
    pub grad_f_sq_max: Option<Scalar>,
}

impl ConstantsOverride {
    pub fn apply(&self, mut b: ConstantsBundle) -> Result<ConstantsBundle> {
        let set = |slot: &mut f64, v: &Option<Scalar>| -> Result<()> {
            if let Some(s) = v {
                *slot = s.value()?;
            }
            Ok(())
        };
        set(&mut b.c, &self.c)?;
        set(&mut b.c_bar, &self.c_bar)?;
        set(&mut b.c0, &self.c0)?;
        set(&mut b.alpha_min, &self.alpha_min)?;
        set(&mut b.alpha_max, &self.alpha_max)?;
        set(&mut b.beta, &self.beta)?;
        set(&mut b.rho, &self.rho)?;
        set(&mut b.grad_f_max, &self.grad_f_max)?;
        set(&mut b.grad_f_sq_max, &self.grad_f_sq_max)?;
        if let Some(list) = &self.b_list {
            b.b_list = values(list)?;
        }
        b.validate()?;
        Ok(b)
    }
}

/// A suite member: a bare evaluator name or `{"name": ..., params...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SuiteEntry {
    Name(String),
    Detailed {
        name: String,
        #[serde(flatten)]
        params: BTreeMap<String, serde_json::Value>,
    },
}

/// Evaluator parameters recognised in suite entries.
const PARAM_NAMES: [&str; 5] = ["c", "c0", "exponent", "m", "min_xsq"];

impl SuiteEntry {
    pub fn name(&self) -> &str {
        match self {
            SuiteEntry::Name(n) => n,
            SuiteEntry::Detailed { name, .. } => name,
        }
    }

    fn param(&self, key: &str) -> Option<&serde_json::Value> {
        match self {
            SuiteEntry::Name(_) => None,
            SuiteEntry::Detailed { params, .. } => params.get(key),
        }
    }

    pub fn scalar(&self, key: &str) -> Result<Option<f64>> {
        match self.param(key) {
            None => Ok(None),
            Some(v) => {
                let s: Scalar = serde_json::from_value(v.clone())?;
                Ok(Some(s.value()?))
            }
        }
    }

    pub fn usize_param(&self, key: &str) -> Result<Option<usize>> {
        match self.param(key) {
            None => Ok(None),
            Some(v) => Ok(Some(serde_json::from_value(v.clone())?)),
        }
    }

    pub fn exponent(&self) -> Result<Option<GapExponent>> {
        match self.param("exponent") {
            None => Ok(None),
            Some(v) => Ok(Some(serde_json::from_value(v.clone())?)),
        }
    }

    fn validate(&self) -> Result<()> {
        if !EVALUATOR_NAMES.contains(&self.name()) {
            return Err(LabError::Config(format!("unknown evaluator {:?}", self.name())));
        }
        if let SuiteEntry::Detailed { params, .. } = self {
            if let Some(bad) = params.keys().find(|k| !PARAM_NAMES.contains(&k.as_str())) {
                return Err(LabError::Config(format!("unknown parameter {bad:?} for {}", self.name())));
            }
        }
        self.scalar("c")?;
        self.scalar("c0")?;
        self.scalar("min_xsq")?;
        self.usize_param("m")?;
        self.exponent()?;
        Ok(())
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for e in &self.experiments {
            if !ids.insert(e.id.as_str()) {
                return Err(LabError::Config(format!("duplicate experiment id {:?}", e.id)));
            }
            e.validate()?;
        }
        Ok(())
    }

    pub fn experiment(&self, id: &str) -> Result<&ExperimentConfig> {
        self.experiments.iter().find(|e| e.id == id).ok_or_else(|| LabError::UnknownExperiment(id.into()))
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() || self.id.contains(['/', '\\', ',', '\n']) {
            return Err(LabError::Config(format!("experiment id {:?} is empty or has reserved characters", self.id)));
        }
        if self.k_max < 1 {
            return Err(LabError::Config(format!("{}: k_max must be at least 1", self.id)));
        }
        if matches!(self.source, SourceSpec::Solve(_)) && self.domain.is_none() {
            return Err(LabError::Config(format!("{}: solve sources need a domain", self.id)));
        }
        if let Some(d) = &self.domain {
            d.build()?;
        }
        for entry in &self.suite {
            entry.validate()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "seed": 3,
        "experiments": [
            {
                "id": "interval",
                "domain": {"kind": "interval", "a": 0, "b": "pi"},
                "weight": {"kind": "constant"},
                "source": {"solve": {"base_points": 31, "levels": 3}},
                "suite": ["ppw", {"name": "yang1", "c": "1/4"}, {"name": "thm11_gap", "exponent": "k_plus_one"}],
                "k_max": 5
            },
            {
                "id": "sphere",
                "geometry": {"n": 2, "p": 1},
                "source": {"oracle": {"name": "sphere", "m": 2, "radius": "sqrt(2)"}},
                "suite": ["self_shrinker_gap"],
                "k_max": 10
            }
        ]
    }"#;

    #[test]
    fn parses_sample() {
        let cfg = RunConfig::parse(SAMPLE).unwrap();
        assert_eq!(cfg.experiments.len(), 2);
        let e = &cfg.experiments[0];
        assert_eq!(e.suite[1].scalar("c").unwrap(), Some(0.25));
        assert_eq!(e.suite[2].exponent().unwrap(), Some(GapExponent::KPlusOne));
        assert!(matches!(&cfg.experiments[1].source, SourceSpec::Oracle(OracleSpec::Sphere { m: 2, .. })));
    }

    #[test]
    fn rejects_unknown_evaluator_and_duplicates() {
        let bad = SAMPLE.replace("\"ppw\"", "\"nope\"");
        assert!(matches!(RunConfig::parse(&bad), Err(LabError::Config(_))));
        let dup = SAMPLE.replace("\"id\": \"sphere\"", "\"id\": \"interval\"");
        assert!(matches!(RunConfig::parse(&dup), Err(LabError::Config(_))));
        let zero = SAMPLE.replace("\"k_max\": 5", "\"k_max\": 0");
        assert!(RunConfig::parse(&zero).is_err());
        let param = SAMPLE.replace("\"c\": \"1/4\"", "\"q\": 1");
        assert!(RunConfig::parse(&param).is_err());
    }
}
