//! Smallest eigenpairs of assembled operators, with residual certificates
//! and Richardson extrapolation over dyadic grid refinements.

mod krylov;

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::discretize::{assemble_schrodinger, assemble_weighted, GeneralizedPair, Grid, SparseSymmetricOperator};
use crate::error::{Error, Result};
use crate::linalg::dense::symmetric_eigen;
use crate::linalg::tridiag::SymTridiagonal;
use crate::model_space::{Boundary, Domain, Shape, WeightFunction};
use crate::oracles;

/// Largest operator the dense route accepts under [`Method::Auto`].
pub const DENSE_LIMIT: usize = 2000;

/// Upper bound on the unknowns of the finest refinement level.
pub const MAX_UNKNOWNS: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Method {
    Dense,
    Iterative,
    #[default]
    Auto,
}

/// Which assembly feeds the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Route {
    #[default]
    Schrodinger,
    Weighted,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolverConfig {
    pub k: usize,
    pub tol: f64,
    pub max_iterations: usize,
    pub rng_seed: u64,
    pub method: Method,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { k: 6, tol: 1e-8, max_iterations: 1000, rng_seed: 0x5eed, method: Method::Auto }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProblemDescriptor {
    pub label: String,
    /// Manifold dimension `n` used by the bound evaluators.
    pub dimension: usize,
    pub boundary: Option<Boundary>,
    pub grid: Vec<usize>,
    pub route: Option<Route>,
}

/// Eigenvalues of one refinement level, kept for convergence audits.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RawLevel {
    pub points_per_axis: Vec<usize>,
    pub spacing: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub residual_norms: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SpectrumWarning {
    /// Successive level differences of this eigenvalue change sign, so the
    /// `h²` error model behind the extrapolation is not yet in force.
    NonMonotoneConvergence { index: usize },
}

/// Ordered eigenvalues with solver metadata.
///
/// `index_base` is 1 for Dirichlet problems (`λ₁` first) and 0 for closed
/// problems (`λ̄₀ = 0` first).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub residual_norms: Vec<f64>,
    pub uncertainties: Vec<f64>,
    pub index_base: usize,
    pub descriptor: ProblemDescriptor,
    pub raw_levels: Vec<RawLevel>,
    pub warnings: Vec<SpectrumWarning>,
    /// The list holds the entire spectrum (finite spectra only).
    pub exhaustive: bool,
}

impl Spectrum {
    /// Exact values with zero residuals and uncertainties.
    pub fn from_values(eigenvalues: Vec<f64>, index_base: usize, label: &str, dimension: usize) -> Self {
        let len = eigenvalues.len();
        Self {
            eigenvalues,
            residual_norms: vec![0.0; len],
            uncertainties: vec![0.0; len],
            index_base,
            descriptor: ProblemDescriptor { label: label.to_string(), dimension, ..ProblemDescriptor::default() },
            raw_levels: Vec::new(),
            warnings: Vec::new(),
            exhaustive: false,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.descriptor.dimension
    }

    pub fn is_closed(&self) -> bool {
        self.index_base == 0
    }

    /// Last paper index available.
    pub fn last_index(&self) -> Option<usize> {
        (self.index_base + self.len()).checked_sub(1).filter(|&i| i >= self.index_base)
    }

    fn position(&self, i: usize) -> Result<usize> {
        if i < self.index_base || i - self.index_base >= self.len() {
            return Err(Error::Index { index: i, available: self.len() });
        }
        Ok(i - self.index_base)
    }

    /// Eigenvalue by paper index (`λ_i`, or `λ̄_i` for closed spectra).
    pub fn lambda(&self, i: usize) -> Result<f64> {
        Ok(self.eigenvalues[self.position(i)?])
    }

    pub fn uncertainty(&self, i: usize) -> Result<f64> {
        Ok(self.uncertainties[self.position(i)?])
    }

    pub fn with_index_base(mut self, base: usize) -> Self {
        self.index_base = base;
        self
    }

    pub fn truncated(mut self, len: usize) -> Self {
        if len < self.len() {
            self.eigenvalues.truncate(len);
            self.residual_norms.truncate(len);
            self.uncertainties.truncate(len);
            self.exhaustive = false;
            for level in &mut self.raw_levels {
                level.eigenvalues.truncate(len);
                level.residual_norms.truncate(len);
            }
        }
        self
    }
}

/// Eigenpairs with unit (or `B`-unit) vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residual_norms: Vec<f64>,
}

impl Eigenpairs {
    fn into_spectrum(self, dimension: usize) -> Spectrum {
        let len = self.values.len();
        Spectrum {
            eigenvalues: self.values,
            residual_norms: self.residual_norms,
            uncertainties: vec![0.0; len],
            index_base: 1,
            descriptor: ProblemDescriptor { dimension, ..ProblemDescriptor::default() },
            raw_levels: Vec::new(),
            warnings: Vec::new(),
            exhaustive: false,
        }
    }
}

fn residual(op: &SparseSymmetricOperator, lambda: f64, v: &[f64], work: &mut [f64]) -> f64 {
    op.matvec(v, work);
    let mut s = 0.0;
    for (w, x) in work.iter().zip(v) {
        let r = w - lambda * x;
        s += r * r;
    }
    libm::sqrt(s)
}

fn certify(pairs: Eigenpairs, tol: f64, iterations: usize) -> Result<Eigenpairs> {
    if pairs.residual_norms.iter().all(|r| *r <= tol) {
        Ok(pairs)
    } else {
        Err(Error::Convergence { iterations, residuals: pairs.residual_norms })
    }
}

/// The `k` smallest eigenpairs of `op`, certified to `cfg.tol`.
pub fn smallest_k_pairs(op: &SparseSymmetricOperator, cfg: &SolverConfig) -> Result<Eigenpairs> {
    cfg.validate()?;
    let n = op.dimension();
    if cfg.k >= n {
        return Err(Error::InvalidArgument("k must be smaller than the operator dimension"));
    }
    let mut work = vec![0.0; n];
    let tridiagonal = if cfg.method == Method::Dense { None } else { op.as_tridiagonal() };
    let use_dense = match cfg.method {
        Method::Dense => true,
        Method::Iterative => false,
        Method::Auto => n <= DENSE_LIMIT,
    };
    if let (Some((d, e)), true) = (tridiagonal, cfg.method == Method::Auto) {
        let t = SymTridiagonal { d, e };
        let values = t.smallest_eigenvalues(cfg.k);
        let mut done: Vec<(f64, Vec<f64>)> = Vec::with_capacity(cfg.k);
        for &lam in &values {
            let v = t.eigenvector(lam, &done);
            done.push((lam, v));
        }
        let residual_norms = done.iter().map(|(l, v)| residual(op, *l, v, &mut work)).collect();
        let vectors = done.into_iter().map(|(_, v)| v).collect();
        return certify(Eigenpairs { values, vectors, residual_norms }, cfg.tol, 1);
    }
    if use_dense {
        let (vals, vecs) = symmetric_eigen(&op.to_dense(), n)?;
        let values: Vec<f64> = vals.into_iter().take(cfg.k).collect();
        let vectors: Vec<Vec<f64>> = vecs.into_iter().take(cfg.k).collect();
        let residual_norms = values.iter().zip(&vectors).map(|(l, v)| residual(op, *l, v, &mut work)).collect();
        return certify(Eigenpairs { values, vectors, residual_norms }, cfg.tol, 1);
    }
    krylov::block_shift_invert(op, cfg)
}

pub fn smallest_k(op: &SparseSymmetricOperator, cfg: &SolverConfig) -> Result<Spectrum> {
    Ok(smallest_k_pairs(op, cfg)?.into_spectrum(0))
}

/// `K v = λ M v` through the reduction `M^{-1/2} K M^{-1/2}`; vectors are
/// `M`-orthonormal and residuals are `‖Kv − λMv‖ / ‖Mv‖`.
pub fn smallest_k_generalized_pairs(pair: &GeneralizedPair, cfg: &SolverConfig) -> Result<Eigenpairs> {
    cfg.validate()?;
    let reduced = pair.reduced();
    let mmin = pair.mass.iter().cloned().fold(f64::INFINITY, f64::min);
    let mmax = pair.mass.iter().cloned().fold(0.0, f64::max);
    let (glo, ghi) = reduced.gershgorin();
    let floor = 1e3 * f64::EPSILON * glo.abs().max(ghi.abs());
    let inner = SolverConfig { tol: (cfg.tol * libm::sqrt(mmin / mmax)).max(floor).min(cfg.tol), ..cfg.clone() };
    let pairs = smallest_k_pairs(&reduced, &inner)?;
    let n = reduced.dimension();
    let s: Vec<f64> = pair.mass.iter().map(|m| 1.0 / libm::sqrt(*m)).collect();
    let mut kv = vec![0.0; n];
    let mut vectors = Vec::with_capacity(pairs.values.len());
    let mut residual_norms = Vec::with_capacity(pairs.values.len());
    for (lam, w) in pairs.values.iter().zip(&pairs.vectors) {
        let v: Vec<f64> = w.iter().zip(&s).map(|(a, b)| a * b).collect();
        pair.stiffness.matvec(&v, &mut kv);
        let mut r2 = 0.0;
        let mut mv2 = 0.0;
        for i in 0..n {
            let mv = pair.mass[i] * v[i];
            let r = kv[i] - lam * mv;
            r2 += r * r;
            mv2 += mv * mv;
        }
        residual_norms.push(libm::sqrt(r2 / mv2));
        vectors.push(v);
    }
    certify(Eigenpairs { values: pairs.values, vectors, residual_norms }, cfg.tol, 1)
}

pub fn smallest_k_generalized(pair: &GeneralizedPair, cfg: &SolverConfig) -> Result<Spectrum> {
    Ok(smallest_k_generalized_pairs(pair, cfg)?.into_spectrum(0))
}

/// Assemble on one grid and solve.
pub fn solve_on_grid(
    domain: &Domain,
    f: &WeightFunction,
    grid: &Grid,
    route: Route,
    cfg: &SolverConfig,
) -> Result<Spectrum> {
    let mut s = match route {
        Route::Schrodinger => smallest_k(&assemble_schrodinger(domain, f, grid)?, cfg)?,
        Route::Weighted => smallest_k_generalized(&assemble_weighted(domain, f, grid)?, cfg)?,
    };
    s.index_base = if domain.is_periodic() { 0 } else { 1 };
    s.descriptor = ProblemDescriptor {
        label: String::new(),
        dimension: domain.dimension(),
        boundary: Some(domain.boundary()),
        grid: grid.points_per_axis().to_vec(),
        route: Some(route),
    };
    Ok(s)
}

/// Romberg limit of values on grids with spacing halved at each level,
/// assuming an error expansion in even powers of `h`.
pub fn romberg(values: &[f64]) -> f64 {
    let mut t: Vec<f64> = values.to_vec();
    let mut factor = 1.0;
    for _ in 1..values.len() {
        factor *= 4.0;
        t = t.windows(2).map(|w| w[1] + (w[1] - w[0]) / (factor - 1.0)).collect();
    }
    t[0]
}

/// Solve on `levels` dyadic refinements of `base_points` and extrapolate
/// each eigenvalue to `h → 0`.
///
/// The uncertainty of each entry is `|extrapolated − finest raw|`. Sphere
/// products combine the flat-factor result with the sphere's closed form.
pub fn refine_and_extrapolate(
    domain: &Domain,
    f: &WeightFunction,
    base_points: &[usize],
    levels: usize,
    route: Route,
    cfg: &SolverConfig,
) -> Result<Spectrum> {
    if levels < 2 {
        return Err(Error::Arity { needed: 2, found: levels });
    }
    cfg.validate()?;
    if let Shape::ProductWithSphere { euclidean, sphere_dim, sphere_radius } = domain.shape() {
        let flat = refine_and_extrapolate(euclidean, f, base_points, levels, route, cfg)?;
        let sphere = oracles::sphere_spectrum(*sphere_dim, *sphere_radius, cfg.k)?;
        let mut s = oracles::product_spectrum(&flat, &sphere, cfg.k)?;
        s.raw_levels = flat.raw_levels;
        s.warnings = flat.warnings;
        s.descriptor = ProblemDescriptor {
            label: String::new(),
            dimension: domain.dimension(),
            boundary: Some(domain.boundary()),
            ..flat.descriptor
        };
        return Ok(s);
    }

    let mut grids = vec![Grid::new(domain, base_points.to_vec())?];
    for _ in 1..levels {
        let next = grids.last().expect("non-empty").refined();
        grids.push(next);
    }
    if grids.last().expect("non-empty").len() > MAX_UNKNOWNS {
        return Err(Error::InvalidGrid("finest refinement exceeds the memory budget"));
    }

    let mut raw = Vec::with_capacity(levels);
    let mut finest = None;
    for g in &grids {
        let s = solve_on_grid(domain, f, g, route, cfg)?;
        raw.push(RawLevel {
            points_per_axis: g.points_per_axis().to_vec(),
            spacing: g.spacing().to_vec(),
            eigenvalues: s.eigenvalues.clone(),
            residual_norms: s.residual_norms.clone(),
        });
        finest = Some(s);
    }
    let finest = finest.expect("at least two levels");
    let k = finest.len();
    let mut eigenvalues = Vec::with_capacity(k);
    let mut uncertainties = Vec::with_capacity(k);
    let mut warnings = Vec::new();
    for j in 0..k {
        let seq: Vec<f64> = raw.iter().map(|l| l.eigenvalues[j]).collect();
        let x = romberg(&seq);
        eigenvalues.push(x);
        uncertainties.push((x - seq[levels - 1]).abs());
        let scale = seq.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        let diffs: Vec<f64> = seq.windows(2).map(|w| w[1] - w[0]).filter(|d| d.abs() > 1e-10 * scale).collect();
        if diffs.windows(2).any(|w| (w[0] > 0.0) != (w[1] > 0.0)) {
            warnings.push(SpectrumWarning::NonMonotoneConvergence { index: j + finest.index_base });
        }
    }
    Ok(Spectrum {
        eigenvalues,
        residual_norms: finest.residual_norms,
        uncertainties,
        index_base: finest.index_base,
        descriptor: finest.descriptor,
        raw_levels: raw,
        warnings,
        exhaustive: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn dirichlet_1d(n: usize) -> SparseSymmetricOperator {
        let d = Domain::interval(0.0, PI).unwrap();
        let g = Grid::uniform(&d, n).unwrap();
        assemble_schrodinger(&d, &WeightFunction::constant(1, 0.0), &g).unwrap()
    }

    #[test]
    fn romberg_removes_h2_and_h4() {
        let f = |h: f64| 3.0 + 2.0 * h * h - 5.0 * h * h * h * h;
        let v = [f(0.1), f(0.05), f(0.025)];
        assert!((romberg(&v) - 3.0).abs() < 1e-13);
    }

    #[test]
    fn routes_agree_on_tridiagonal_operator() {
        let op = dirichlet_1d(120);
        let cfg = SolverConfig { k: 5, ..SolverConfig::default() };
        let a = smallest_k(&op, &cfg).unwrap();
        let b = smallest_k(&op, &SolverConfig { method: Method::Dense, ..cfg.clone() }).unwrap();
        let c = smallest_k(&op, &SolverConfig { method: Method::Iterative, ..cfg.clone() }).unwrap();
        for j in 0..5 {
            assert!((a.eigenvalues[j] - b.eigenvalues[j]).abs() < 1e-10);
            assert!((a.eigenvalues[j] - c.eigenvalues[j]).abs() < 1e-9);
        }
        assert!(c.residual_norms.iter().all(|r| *r <= 1e-8));
    }

    #[test]
    fn k_must_be_below_dimension() {
        let op = dirichlet_1d(5);
        let cfg = SolverConfig { k: 5, ..SolverConfig::default() };
        assert!(matches!(smallest_k(&op, &cfg), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn interval_extrapolation_examples() {
        let d = Domain::interval(0.0, PI).unwrap();
        let f = WeightFunction::constant(1, 0.0);
        let cfg = SolverConfig { k: 10, ..SolverConfig::default() };
        let s = refine_and_extrapolate(&d, &f, &[250], 3, Route::Schrodinger, &cfg).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-6);
        assert!((s.eigenvalues[9] - 100.0).abs() < 1e-4);
        assert!(s.raw_levels[2].eigenvalues[0] < 1.0);
        assert_eq!(s.index_base, 1);
        assert_eq!(s.raw_levels.len(), 3);

        let shifted =
            refine_and_extrapolate(&d, &WeightFunction::constant(1, 7.5), &[250], 3, Route::Schrodinger, &cfg).unwrap();
        assert_eq!(shifted.eigenvalues, s.eigenvalues);
    }

    #[test]
    fn levels_must_be_at_least_two() {
        let d = Domain::interval(0.0, PI).unwrap();
        let r = refine_and_extrapolate(
            &d,
            &WeightFunction::constant(1, 0.0),
            &[10],
            1,
            Route::Schrodinger,
            &SolverConfig::default(),
        );
        assert!(matches!(r, Err(Error::Arity { needed: 2, found: 1 })));
    }

    #[test]
    fn generalized_with_scalar_mass_scales_eigenvalues() {
        let op = dirichlet_1d(40);
        let cfg = SolverConfig { k: 4, ..SolverConfig::default() };
        let plain = smallest_k(&op, &cfg).unwrap();
        let pair = GeneralizedPair::new(op.clone(), vec![4.0; 40]).unwrap();
        let g = smallest_k_generalized(&pair, &cfg).unwrap();
        for j in 0..4 {
            assert!((g.eigenvalues[j] - plain.eigenvalues[j] / 4.0).abs() < 1e-10);
        }
    }

    #[test]
    fn product_with_sphere_uses_closed_form_factor() {
        let cyl = Domain::product_with_sphere(Domain::interval(0.0, PI).unwrap(), 1, 1.0).unwrap();
        let cfg = SolverConfig { k: 4, ..SolverConfig::default() };
        let s = refine_and_extrapolate(&cyl, &WeightFunction::constant(1, 0.0), &[100], 3, Route::Schrodinger, &cfg)
            .unwrap();
        let expected = [1.0, 2.0, 2.0, 4.0];
        for j in 0..4 {
            assert!((s.eigenvalues[j] - expected[j]).abs() < 1e-6, "{:?}", s.eigenvalues);
        }
        assert_eq!(s.descriptor.dimension, 2);
    }
}
