//! Weight functions, model domains and reference geometric data.

use alloc::boxed::Box as HeapBox;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::util::next_index;

/// Samples of `f` (and optionally `∇f`, `Δf`) on a uniform tensor grid.
///
/// Node `j` on axis `a` sits at `lo[a] + j·(hi[a] − lo[a])/(counts[a] − 1)`.
/// Arrays are row-major with the last axis fastest; `gradient` stores the
/// `n` components of each node contiguously.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TabulatedWeight {
    lo: Vec<f64>,
    hi: Vec<f64>,
    counts: Vec<usize>,
    values: Vec<f64>,
    gradient: Option<Vec<f64>>,
    laplacian: Option<Vec<f64>>,
}

impl TabulatedWeight {
    pub fn new(
        lo: Vec<f64>,
        hi: Vec<f64>,
        counts: Vec<usize>,
        values: Vec<f64>,
        gradient: Option<Vec<f64>>,
        laplacian: Option<Vec<f64>>,
    ) -> Result<Self> {
        let n = lo.len();
        if n == 0 || hi.len() != n || counts.len() != n {
            return Err(Error::InvalidArgument("table axes must agree and be non-empty"));
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l < h)) {
            return Err(Error::InvalidDomain("table bounds must satisfy lo < hi"));
        }
        if counts.iter().any(|&c| c < 2) {
            return Err(Error::InvalidGrid("tables need at least 2 nodes per axis"));
        }
        let total: usize = counts.iter().product();
        if values.len() != total {
            return Err(Error::DimensionMismatch { expected: total, found: values.len() });
        }
        if let Some(g) = &gradient {
            if g.len() != total * n {
                return Err(Error::DimensionMismatch { expected: total * n, found: g.len() });
            }
        }
        if let Some(l) = &laplacian {
            if l.len() != total {
                return Err(Error::DimensionMismatch { expected: total, found: l.len() });
            }
        }
        let all_finite = values.iter().all(|v| v.is_finite())
            && gradient.iter().flatten().all(|v| v.is_finite())
            && laplacian.iter().flatten().all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidArgument("tabulated samples must be finite"));
        }
        Ok(Self { lo, hi, counts, values, gradient, laplacian })
    }

    pub fn dimension(&self) -> usize {
        self.lo.len()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn has_derivatives(&self) -> bool {
        self.gradient.is_some() && self.laplacian.is_some()
    }

    pub fn node(&self, idx: &[usize]) -> Vec<f64> {
        (0..self.dimension())
            .map(|a| {
                let h = (self.hi[a] - self.lo[a]) / (self.counts[a] - 1) as f64;
                self.lo[a] + idx[a] as f64 * h
            })
            .collect()
    }

    /// Corner flat indices and multilinear weights of the cell holding `x`.
    fn stencil(&self, x: &[f64]) -> Result<Vec<(usize, f64)>> {
        let n = self.dimension();
        let mut base = vec![0usize; n];
        let mut frac = vec![0.0; n];
        for a in 0..n {
            let span = self.hi[a] - self.lo[a];
            let slack = 1e-12 * span;
            if !(x[a] >= self.lo[a] - slack && x[a] <= self.hi[a] + slack) {
                return Err(Error::OutOfRange { axis: a, value: x[a] });
            }
            let cells = self.counts[a] - 1;
            let t = ((x[a] - self.lo[a]) / span * cells as f64).clamp(0.0, cells as f64);
            let i = (libm::floor(t) as usize).min(cells - 1);
            base[a] = i;
            frac[a] = t - i as f64;
        }
        let mut out = Vec::with_capacity(1 << n);
        for corner in 0..(1usize << n) {
            let mut flat = 0usize;
            let mut w = 1.0;
            for a in 0..n {
                let up = (corner >> (n - 1 - a)) & 1;
                flat = flat * self.counts[a] + base[a] + up;
                w *= if up == 1 { frac[a] } else { 1.0 - frac[a] };
            }
            out.push((flat, w));
        }
        Ok(out)
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(self.stencil(x)?.iter().map(|&(i, w)| w * self.values[i]).sum())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum WeightKind {
    Constant(f64),
    /// `f(x) = coeff·|x|²`.
    Quadratic(f64),
    /// `f(x) = coeff·|x|² + ⟨linear, x⟩ + offset`.
    AffineQuadratic {
        coeff: f64,
        linear: Vec<f64>,
        offset: f64,
    },
    Tabulated(TabulatedWeight),
}

/// The potential `f` defining the measure `e^{−f} dv` on the Euclidean factor.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeightFunction {
    kind: WeightKind,
    dimension: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftQuantities {
    pub grad_f: Vec<f64>,
    pub lap_f: f64,
    pub grad_f_sq: f64,
    /// `Δ_f f = Δf − |∇f|²`.
    pub drift_lap_f: f64,
}

impl WeightFunction {
    pub fn constant(dimension: usize, value: f64) -> Self {
        Self { kind: WeightKind::Constant(value), dimension }
    }

    pub fn quadratic(dimension: usize, coeff: f64) -> Self {
        Self { kind: WeightKind::Quadratic(coeff), dimension }
    }

    pub fn affine_quadratic(coeff: f64, linear: Vec<f64>, offset: f64) -> Self {
        let dimension = linear.len();
        Self { kind: WeightKind::AffineQuadratic { coeff, linear, offset }, dimension }
    }

    pub fn tabulated(table: TabulatedWeight) -> Self {
        let dimension = table.dimension();
        Self { kind: WeightKind::Tabulated(table), dimension }
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_constant(&self) -> bool {
        match &self.kind {
            WeightKind::Constant(_) => true,
            WeightKind::Quadratic(a) => *a == 0.0,
            WeightKind::AffineQuadratic { coeff, linear, .. } => *coeff == 0.0 && linear.iter().all(|&b| b == 0.0),
            WeightKind::Tabulated(_) => false,
        }
    }

    /// Quadratic and affine-quadratic parts `(a, b, offset)` for analytic kinds.
    pub(crate) fn affine_parts(&self) -> Option<(f64, Vec<f64>, f64)> {
        match &self.kind {
            WeightKind::Constant(v) => Some((0.0, vec![0.0; self.dimension], *v)),
            WeightKind::Quadratic(a) => Some((*a, vec![0.0; self.dimension], 0.0)),
            WeightKind::AffineQuadratic { coeff, linear, offset } => Some((*coeff, linear.clone(), *offset)),
            WeightKind::Tabulated(_) => None,
        }
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, found: x.len() });
        }
        Ok(())
    }

    pub fn eval_potential(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(match &self.kind {
            WeightKind::Constant(v) => *v,
            WeightKind::Quadratic(a) => a * x.iter().map(|t| t * t).sum::<f64>(),
            WeightKind::AffineQuadratic { coeff, linear, offset } => {
                let sq: f64 = x.iter().map(|t| t * t).sum();
                let lin: f64 = linear.iter().zip(x).map(|(b, t)| b * t).sum();
                coeff * sq + lin + offset
            }
            WeightKind::Tabulated(t) => t.value(x)?,
        })
    }

    pub fn drift_quantities(&self, x: &[f64]) -> Result<DriftQuantities> {
        self.check_point(x)?;
        let n = self.dimension;
        let (grad_f, lap_f) = match &self.kind {
            WeightKind::Tabulated(t) => {
                let (Some(g), Some(l)) = (&t.gradient, &t.laplacian) else {
                    return Err(Error::MissingData("tabulated weight has no derivative tables"));
                };
                let st = t.stencil(x)?;
                let mut grad = vec![0.0; n];
                let mut lap = 0.0;
                for &(i, w) in &st {
                    for (a, ga) in grad.iter_mut().enumerate() {
                        *ga += w * g[i * n + a];
                    }
                    lap += w * l[i];
                }
                (grad, lap)
            }
            _ => {
                let (a, b, _) = self.affine_parts().expect("analytic kind");
                let grad: Vec<f64> = x.iter().zip(&b).map(|(xi, bi)| 2.0 * a * xi + bi).collect();
                (grad, 2.0 * a * n as f64)
            }
        };
        let grad_f_sq: f64 = grad_f.iter().map(|g| g * g).sum();
        Ok(DriftQuantities { grad_f, lap_f, grad_f_sq, drift_lap_f: lap_f - grad_f_sq })
    }

    /// `V = ¼|∇f|² − ½Δf`, so that `e^{f/2}(−Δ_f)e^{−f/2} = −Δ + V`.
    pub fn schrodinger_potential(&self, x: &[f64]) -> Result<f64> {
        if let WeightKind::Constant(_) = self.kind {
            self.check_point(x)?;
            return Ok(0.0);
        }
        let d = self.drift_quantities(x)?;
        Ok(0.25 * d.grad_f_sq - 0.5 * d.lap_f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Boundary {
    Dirichlet,
    Periodic,
    ClosedProduct,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Shape {
    Interval { a: f64, b: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    FlatTorus { periods: Vec<f64> },
    ProductWithSphere { euclidean: HeapBox<Domain>, sphere_dim: usize, sphere_radius: f64 },
}

/// A model space together with its boundary condition.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Domain {
    shape: Shape,
    boundary: Boundary,
}

impl Domain {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidDomain("interval needs finite a < b"));
        }
        Ok(Self { shape: Shape::Interval { a, b }, boundary: Boundary::Dirichlet })
    }

    pub fn box_domain(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidDomain("box corners must have equal, non-zero length"));
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l.is_finite() && h.is_finite() && l < h)) {
            return Err(Error::InvalidDomain("box needs finite lo < hi componentwise"));
        }
        Ok(Self { shape: Shape::Box { lo, hi }, boundary: Boundary::Dirichlet })
    }

    pub fn torus(periods: Vec<f64>) -> Result<Self> {
        if periods.is_empty() || periods.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(Error::InvalidDomain("torus periods must be positive"));
        }
        Ok(Self { shape: Shape::FlatTorus { periods }, boundary: Boundary::Periodic })
    }

    pub fn product_with_sphere(euclidean: Domain, sphere_dim: usize, sphere_radius: f64) -> Result<Self> {
        if matches!(euclidean.shape, Shape::ProductWithSphere { .. }) {
            return Err(Error::InvalidDomain("euclidean factor must be an interval, box or torus"));
        }
        if sphere_dim < 1 {
            return Err(Error::InvalidDomain("sphere dimension must be at least 1"));
        }
        if !(sphere_radius.is_finite() && sphere_radius > 0.0) {
            return Err(Error::InvalidDomain("sphere radius must be positive"));
        }
        Ok(Self {
            shape: Shape::ProductWithSphere { euclidean: HeapBox::new(euclidean), sphere_dim, sphere_radius },
            boundary: Boundary::ClosedProduct,
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Total manifold dimension.
    pub fn dimension(&self) -> usize {
        match &self.shape {
            Shape::ProductWithSphere { euclidean, sphere_dim, .. } => euclidean.dimension() + sphere_dim,
            _ => self.euclidean_dimension(),
        }
    }

    /// Dimension of the flat factor carrying the weight.
    pub fn euclidean_dimension(&self) -> usize {
        match &self.shape {
            Shape::Interval { .. } => 1,
            Shape::Box { lo, .. } => lo.len(),
            Shape::FlatTorus { periods } => periods.len(),
            Shape::ProductWithSphere { euclidean, .. } => euclidean.euclidean_dimension(),
        }
    }

    /// The flat factor: `self` unless this is a product with a sphere.
    pub fn euclidean_part(&self) -> &Domain {
        match &self.shape {
            Shape::ProductWithSphere { euclidean, .. } => euclidean,
            _ => self,
        }
    }

    /// Lower and upper corners of the flat factor; `[0, P)` for tori.
    pub fn extent(&self) -> (Vec<f64>, Vec<f64>) {
        match &self.shape {
            Shape::Interval { a, b } => (vec![*a], vec![*b]),
            Shape::Box { lo, hi } => (lo.clone(), hi.clone()),
            Shape::FlatTorus { periods } => (vec![0.0; periods.len()], periods.clone()),
            Shape::ProductWithSphere { euclidean, .. } => euclidean.extent(),
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.euclidean_part().shape, Shape::FlatTorus { .. })
    }
}

/// Geometric data of the reference isometric immersion.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeometrySpec {
    pub n: usize,
    pub p: usize,
    /// Maximum of `n²H²` over the domain.
    pub mean_curv_sq_max: f64,
    /// `(min, max)` of `|X|²`.
    pub pos_vec_sq_range: (f64, f64),
    pub scalar_curv_min: f64,
    pub soliton_rho: f64,
}

impl GeometrySpec {
    pub fn new(
        n: usize,
        p: usize,
        mean_curv_sq_max: f64,
        pos_vec_sq_range: (f64, f64),
        scalar_curv_min: f64,
        soliton_rho: f64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive"));
        }
        if !(mean_curv_sq_max >= 0.0) {
            return Err(Error::InvalidArgument("n²H² must be nonnegative"));
        }
        let (lo, hi) = pos_vec_sq_range;
        if !(lo >= 0.0 && lo <= hi) {
            return Err(Error::InvalidArgument("|X|² range must satisfy 0 ≤ min ≤ max"));
        }
        if !scalar_curv_min.is_finite() || !soliton_rho.is_finite() {
            return Err(Error::InvalidArgument("curvature data must be finite"));
        }
        Ok(Self { n, p, mean_curv_sq_max, pos_vec_sq_range, scalar_curv_min, soliton_rho })
    }

    /// Flat space under the identity embedding, with the given `|X|²` range.
    pub fn flat(n: usize, pos_vec_sq_range: (f64, f64)) -> Result<Self> {
        Self::new(n, 0, 0.0, pos_vec_sq_range, 0.0, 0.0)
    }

    /// Round sphere `S^m(r) ⊂ ℝ^{m+1}`.
    pub fn round_sphere(m: usize, r: f64) -> Result<Self> {
        if m < 1 || !(r > 0.0) {
            return Err(Error::InvalidDomain("sphere needs m ≥ 1 and r > 0"));
        }
        let mf = m as f64;
        let r2 = r * r;
        Self::new(m, 1, mf * mf / r2, (r2, r2), mf * (mf - 1.0) / r2, (mf - 1.0) / r2)
    }

    /// Reference immersion of a model domain: the identity for boxes, the
    /// product of round circles `ℝ^{2n}` for flat tori, and the product with
    /// a round sphere `ℝ^{m+1}` for sphere products.
    pub fn reference(domain: &Domain) -> Result<Self> {
        match domain.shape() {
            Shape::Interval { .. } | Shape::Box { .. } => {
                let (lo, hi) = domain.extent();
                Self::flat(lo.len(), pos_vec_sq_range_box(&lo, &hi))
            }
            Shape::FlatTorus { periods } => {
                let n = periods.len();
                let radii: Vec<f64> = periods.iter().map(|p| p / (2.0 * core::f64::consts::PI)).collect();
                let h2: f64 = radii.iter().map(|r| 1.0 / (r * r)).sum();
                let x2: f64 = radii.iter().map(|r| r * r).sum();
                Self::new(n, n, h2, (x2, x2), 0.0, 0.0)
            }
            Shape::ProductWithSphere { euclidean, sphere_dim, sphere_radius } => {
                let e = Self::reference(euclidean)?;
                let s = Self::round_sphere(*sphere_dim, *sphere_radius)?;
                Self::new(
                    e.n + s.n,
                    e.p + s.p,
                    e.mean_curv_sq_max + s.mean_curv_sq_max,
                    (e.pos_vec_sq_range.0 + s.pos_vec_sq_range.0, e.pos_vec_sq_range.1 + s.pos_vec_sq_range.1),
                    e.scalar_curv_min + s.scalar_curv_min,
                    0.0,
                )
            }
        }
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.soliton_rho = rho;
        self
    }
}

/// Exact range of `|x|²` over the box `[lo, hi]`.
pub fn pos_vec_sq_range_box(lo: &[f64], hi: &[f64]) -> (f64, f64) {
    let mut min = 0.0;
    let mut max = 0.0;
    for (&l, &h) in lo.iter().zip(hi) {
        min += if l <= 0.0 && h >= 0.0 { 0.0 } else { (l * l).min(h * h) };
        max += (l * l).max(h * h);
    }
    (min, max)
}

/// Weighted mean `c̄ = ∫ f e^{−f} / ∫ e^{−f}` over the flat factor, by the
/// midpoint rule with `resolution` cells per axis.
///
/// Sphere factors carry a constant weight and cancel from the ratio.
pub fn weighted_mean_of_f(domain: &Domain, f: &WeightFunction, resolution: usize) -> Result<f64> {
    if resolution < 8 {
        return Err(Error::InvalidGrid("quadrature needs at least 8 points per axis"));
    }
    let flat = domain.euclidean_part();
    let n = flat.euclidean_dimension();
    if f.dimension() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.dimension() });
    }
    if let WeightKind::Constant(v) = f.kind() {
        return Ok(*v);
    }
    let (lo, hi) = flat.extent();
    let h: Vec<f64> = lo.iter().zip(&hi).map(|(l, u)| (u - l) / resolution as f64).collect();
    let counts = vec![resolution; n];
    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    let mut values = Vec::with_capacity(resolution.pow(n as u32));
    loop {
        for a in 0..n {
            x[a] = lo[a] + (idx[a] as f64 + 0.5) * h[a];
        }
        values.push(f.eval_potential(&x)?);
        if !next_index(&mut idx, &counts) {
            break;
        }
    }
    let fmin = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut num = 0.0;
    let mut den = 0.0;
    for &v in &values {
        let w = libm::exp(fmin - v);
        num += v * w;
        den += w;
    }
    Ok(num / den)
}
