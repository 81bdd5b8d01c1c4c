//! Finite-difference assembly of `−Δ_f` on uniform grids.
//!
//! Two routes are provided. The Schrödinger route conjugates by `e^{−f/2}`
//! and assembles `−Δ_h + diag(V)` with the `(2d+1)`-point stencil. The
//! weighted route keeps the divergence form `−e^{f} div(e^{−f}∇u)` as a
//! generalized pair `K v = λ M v` with face conductances `e^{−f(midpoint)}`
//! and diagonal mass `e^{−f(x_i)}·∏h`.
//!
//! Nodes are numbered row-major over the axes in declaration order, with
//! the last axis varying fastest.

use alloc::vec;
use alloc::vec::Vec;

use crate::eigensolve::{self, Route, SolverConfig};
use crate::error::{Error, Result};
use crate::model_space::{Domain, Shape, WeightFunction};
use crate::util::next_index;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid {
    points_per_axis: Vec<usize>,
    spacing: Vec<f64>,
    origin: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    periodic: bool,
}

impl Grid {
    /// Interior nodes of a Dirichlet box (`h = L/(N+1)`) or all nodes of a
    /// torus (`h = P/N`).
    pub fn new(domain: &Domain, points_per_axis: Vec<usize>) -> Result<Self> {
        let periodic = match domain.shape() {
            Shape::Interval { .. } | Shape::Box { .. } => false,
            Shape::FlatTorus { .. } => true,
            Shape::ProductWithSphere { .. } => {
                return Err(Error::UnsupportedDomain("sphere products are not discretized"));
            }
        };
        let n = domain.euclidean_dimension();
        if points_per_axis.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: points_per_axis.len() });
        }
        let min_points = if periodic { 3 } else { 1 };
        if points_per_axis.iter().any(|&p| p < min_points) {
            return Err(Error::InvalidGrid("too few points per axis"));
        }
        let (lo, hi) = domain.extent();
        let mut spacing = Vec::with_capacity(n);
        let mut origin = Vec::with_capacity(n);
        for a in 0..n {
            let extent = hi[a] - lo[a];
            let p = points_per_axis[a] as f64;
            if periodic {
                spacing.push(extent / p);
                origin.push(lo[a]);
            } else {
                let h = extent / (p + 1.0);
                spacing.push(h);
                origin.push(lo[a] + h);
            }
        }
        Ok(Self { points_per_axis, spacing, origin, lo, hi, periodic })
    }

    pub fn uniform(domain: &Domain, points: usize) -> Result<Self> {
        Self::new(domain, vec![points; domain.euclidean_dimension()])
    }

    pub fn points_per_axis(&self) -> &[usize] {
        &self.points_per_axis
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn dimension(&self) -> usize {
        self.points_per_axis.len()
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    /// Number of unknowns.
    pub fn len(&self) -> usize {
        self.points_per_axis.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn coordinate(&self, axis: usize, index: usize) -> f64 {
        self.origin[axis] + index as f64 * self.spacing[axis]
    }

    /// One dyadic refinement: `N → 2N+1` (Dirichlet) or `N → 2N` (periodic),
    /// which halves every spacing.
    pub fn refined(&self) -> Self {
        let points: Vec<usize> =
            self.points_per_axis.iter().map(|&p| if self.periodic { 2 * p } else { 2 * p + 1 }).collect();
        let mut g = self.clone();
        for a in 0..points.len() {
            let extent = self.hi[a] - self.lo[a];
            let p = points[a] as f64;
            if self.periodic {
                g.spacing[a] = extent / p;
            } else {
                g.spacing[a] = extent / (p + 1.0);
                g.origin[a] = self.lo[a] + g.spacing[a];
            }
        }
        g.points_per_axis = points;
        g
    }

    fn check_domain(&self, domain: &Domain, f: &WeightFunction) -> Result<()> {
        let n = domain.euclidean_dimension();
        if self.dimension() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.dimension() });
        }
        if f.dimension() != n {
            return Err(Error::DimensionMismatch { expected: n, found: f.dimension() });
        }
        if matches!(domain.shape(), Shape::ProductWithSphere { .. }) {
            return Err(Error::UnsupportedDomain("sphere products are not discretized"));
        }
        let (lo, hi) = domain.extent();
        if lo != self.lo || hi != self.hi || domain.is_periodic() != self.periodic {
            return Err(Error::InvalidGrid("grid was built for a different domain"));
        }
        Ok(())
    }

    fn strides(&self) -> Vec<usize> {
        let n = self.dimension();
        let mut s = vec![1usize; n];
        for a in (0..n.saturating_sub(1)).rev() {
            s[a] = s[a + 1] * self.points_per_axis[a + 1];
        }
        s
    }
}

/// Symmetric sparse matrix in compressed row layout with sorted columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetricOperator {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    symmetric: bool,
}

impl SparseSymmetricOperator {
    /// Builds from per-row `(column, value)` lists. Every row must contain
    /// its diagonal and the pattern must be bit-exactly symmetric.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for (i, mut row) in rows.into_iter().enumerate() {
            row.sort_by_key(|e| e.0);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidArgument("duplicate column in row"));
            }
            if !row.iter().any(|e| e.0 == i) {
                return Err(Error::InvalidArgument("diagonal entry missing"));
            }
            for (j, v) in row {
                if j >= n {
                    return Err(Error::Index { index: j, available: n });
                }
                col_idx.push(j);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        let mut op = Self { n, row_ptr, col_idx, values, symmetric: false };
        op.symmetric = op.is_exactly_symmetric();
        if !op.symmetric {
            return Err(Error::InvalidArgument("operator is not exactly symmetric"));
        }
        Ok(op)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(p) => vals[p],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Transpose equality, compared bit for bit.
    pub fn is_exactly_symmetric(&self) -> bool {
        (0..self.n).all(|i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).all(|(&j, &v)| {
                let (cj, vj) = self.row(j);
                match cj.binary_search(&i) {
                    Ok(p) => vj[p].to_bits() == v.to_bits(),
                    Err(_) => false,
                }
            })
        })
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let r = self.row_ptr[i]..self.row_ptr[i + 1];
            let mut s = 0.0;
            for (&j, &v) in self.col_idx[r.clone()].iter().zip(&self.values[r]) {
                s += v * x[j];
            }
            y[i] = s;
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                a[i * self.n + j] = v;
            }
        }
        a
    }

    /// Gershgorin enclosure `(lower, upper)` of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            let mut diag = 0.0;
            let mut r = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                if j == i {
                    diag = v;
                } else {
                    r += v.abs();
                }
            }
            lo = lo.min(diag - r);
            hi = hi.max(diag + r);
        }
        (lo, hi)
    }

    /// The `(d, e)` bands when the matrix is tridiagonal without wraparound.
    pub fn as_tridiagonal(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let mut d = Vec::with_capacity(self.n);
        let mut e = Vec::with_capacity(self.n.saturating_sub(1));
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for &j in cols {
                if j + 1 < i || j > i + 1 {
                    return None;
                }
            }
            d.push(self.get(i, i));
            if i + 1 < self.n {
                e.push(self.get(i, i + 1));
            }
            let _ = vals;
        }
        Some((d, e))
    }

    /// `diag(s) · A · diag(s)`, keeping bit-exact symmetry.
    pub fn symmetric_scaled(&self, s: &[f64]) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[p];
                let (a, b) = if i <= j { (s[i], s[j]) } else { (s[j], s[i]) };
                out.values[p] = self.values[p] * a * b;
            }
        }
        out
    }
}

/// Stiffness `K` and diagonal mass `M` of the weighted Dirichlet form.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedPair {
    pub stiffness: SparseSymmetricOperator,
    pub mass: Vec<f64>,
}

impl GeneralizedPair {
    pub fn new(stiffness: SparseSymmetricOperator, mass: Vec<f64>) -> Result<Self> {
        if mass.len() != stiffness.dimension() {
            return Err(Error::DimensionMismatch { expected: stiffness.dimension(), found: mass.len() });
        }
        if mass.iter().any(|m| !(*m > 0.0) || !m.is_finite()) {
            return Err(Error::InvalidArgument("mass must be strictly positive"));
        }
        Ok(Self { stiffness, mass })
    }

    /// The symmetric reduction `M^{-1/2} K M^{-1/2}`.
    pub fn reduced(&self) -> SparseSymmetricOperator {
        let s: Vec<f64> = self.mass.iter().map(|m| 1.0 / libm::sqrt(*m)).collect();
        self.stiffness.symmetric_scaled(&s)
    }
}

/// `−Δ_h + diag(V)` with `V = ¼|∇f|² − ½Δf`.
pub fn assemble_schrodinger(domain: &Domain, f: &WeightFunction, grid: &Grid) -> Result<SparseSymmetricOperator> {
    grid.check_domain(domain, f)?;
    let n = grid.dimension();
    let counts = grid.points_per_axis.clone();
    let strides = grid.strides();
    let inv_h2: Vec<f64> = grid.spacing.iter().map(|h| 1.0 / (h * h)).collect();
    let stencil_diag: f64 = inv_h2.iter().map(|w| 2.0 * w).sum();
    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    let mut rows = Vec::with_capacity(grid.len());
    loop {
        for a in 0..n {
            x[a] = grid.coordinate(a, idx[a]);
        }
        let flat: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
        let mut row = Vec::with_capacity(2 * n + 1);
        row.push((flat, stencil_diag + f.schrodinger_potential(&x)?));
        for a in 0..n {
            for nb in neighbours(idx[a], counts[a], grid.periodic) {
                let j = flat - idx[a] * strides[a] + nb * strides[a];
                row.push((j, -inv_h2[a]));
            }
        }
        rows.push(row);
        if !next_index(&mut idx, &counts) {
            break;
        }
    }
    SparseSymmetricOperator::from_rows(rows)
}

fn neighbours(i: usize, count: usize, periodic: bool) -> impl Iterator<Item = usize> {
    let below = if i > 0 {
        Some(i - 1)
    } else if periodic {
        Some(count - 1)
    } else {
        None
    };
    let above = if i + 1 < count {
        Some(i + 1)
    } else if periodic {
        Some(0)
    } else {
        None
    };
    below.into_iter().chain(above)
}

/// Flux-form generalized pair for `−Δ_f`.
pub fn assemble_weighted(domain: &Domain, f: &WeightFunction, grid: &Grid) -> Result<GeneralizedPair> {
    grid.check_domain(domain, f)?;
    let n = grid.dimension();
    let counts = grid.points_per_axis.clone();
    let strides = grid.strides();
    let total = grid.len();
    let vol = grid.cell_volume();
    let inv_h2: Vec<f64> = grid.spacing.iter().map(|h| 1.0 / (h * h)).collect();

    // below[i*n + a]: coupling through the face between node i and its
    // lower neighbour on axis a (the wall for Dirichlet boundary nodes).
    let mut below = vec![0.0; total * n];
    let mut top_wall = vec![0.0; total * n];
    let mut mass = vec![0.0; total];
    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    let mut flat = 0usize;
    loop {
        for a in 0..n {
            x[a] = grid.coordinate(a, idx[a]);
        }
        mass[flat] = libm::exp(-f.eval_potential(&x)?) * vol;
        for a in 0..n {
            let xa = x[a];
            let h = grid.spacing[a];
            x[a] = if grid.periodic && idx[a] == 0 { grid.coordinate(a, counts[a]) - 0.5 * h } else { xa - 0.5 * h };
            below[flat * n + a] = libm::exp(-f.eval_potential(&x)?) * vol * inv_h2[a];
            if !grid.periodic && idx[a] + 1 == counts[a] {
                x[a] = xa + 0.5 * h;
                top_wall[flat * n + a] = libm::exp(-f.eval_potential(&x)?) * vol * inv_h2[a];
            }
            x[a] = xa;
        }
        flat += 1;
        if !next_index(&mut idx, &counts) {
            break;
        }
    }

    let mut rows = Vec::with_capacity(total);
    let mut idx = vec![0usize; n];
    let mut flat = 0usize;
    loop {
        let mut row = Vec::with_capacity(2 * n + 1);
        let mut diag = 0.0;
        for a in 0..n {
            let w_below = below[flat * n + a];
            let up = if idx[a] + 1 < counts[a] {
                Some(flat + strides[a])
            } else if grid.periodic {
                Some(flat + strides[a] - counts[a] * strides[a])
            } else {
                None
            };
            let w_above = match up {
                Some(j) => below[j * n + a],
                None => top_wall[flat * n + a],
            };
            diag += w_below + w_above;
            let down = if idx[a] > 0 {
                Some(flat - strides[a])
            } else if grid.periodic {
                Some(flat + (counts[a] - 1) * strides[a])
            } else {
                None
            };
            if let Some(j) = down {
                row.push((j, -w_below));
            }
            if let Some(j) = up {
                row.push((j, -w_above));
            }
        }
        row.push((flat, diag));
        rows.push(row);
        flat += 1;
        if !next_index(&mut idx, &counts) {
            break;
        }
    }
    GeneralizedPair::new(SparseSymmetricOperator::from_rows(rows)?, mass)
}

/// Empirical convergence order of the lowest non-trivial eigenvalue over a
/// dyadic family of grids, measured against the Richardson limit of the
/// whole family: `log₂(e_{L−1}/e_L)` on the two finest grids.
///
/// On tori the constant mode is skipped and the order is measured on the
/// first nonzero eigenvalue.
pub fn stencil_consistency_order(domain: &Domain, f: &WeightFunction, grids: &[Grid]) -> Result<f64> {
    if grids.len() < 3 {
        return Err(Error::Arity { needed: 3, found: grids.len() });
    }
    let index = if domain.is_periodic() { 1 } else { 0 };
    let cfg = SolverConfig { k: index + 1, ..SolverConfig::default() };
    let mut raw = Vec::with_capacity(grids.len());
    for g in grids {
        let s = eigensolve::solve_on_grid(domain, f, g, Route::Schrodinger, &cfg)?;
        raw.push(s.eigenvalues[index]);
    }
    let limit = eigensolve::romberg(&raw);
    let m = raw.len();
    let e1 = (raw[m - 2] - limit).abs();
    let e2 = (raw[m - 1] - limit).abs();
    Ok(libm::log2(e1 / e2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn grid_spacing_rules() {
        let d = Domain::interval(0.0, PI).unwrap();
        let g = Grid::uniform(&d, 3).unwrap();
        assert_eq!(g.spacing()[0], PI / 4.0);
        assert_eq!(g.refined().points_per_axis(), &[7]);
        assert_eq!(g.refined().spacing()[0], PI / 8.0);
        let t = Domain::torus(vec![2.0 * PI, 1.0]).unwrap();
        let g = Grid::new(&t, vec![8, 4]).unwrap();
        assert_eq!(g.spacing(), &[2.0 * PI / 8.0, 0.25]);
        assert_eq!(g.refined().points_per_axis(), &[16, 8]);
        assert!(matches!(
            Grid::uniform(&d, 3).and_then(|_| Grid::new(&d, vec![3, 3])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(Grid::new(&d, vec![0]), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(&t, vec![2, 8]), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn schrodinger_interval_stencil() {
        let d = Domain::interval(0.0, PI).unwrap();
        let g = Grid::uniform(&d, 3).unwrap();
        let op = assemble_schrodinger(&d, &WeightFunction::constant(1, 0.0), &g).unwrap();
        let h = PI / 4.0;
        assert!((op.get(0, 0) - 2.0 / (h * h)).abs() < 1e-14);
        assert!((op.get(0, 0) - 3.2423).abs() < 1e-4);
        assert_eq!(op.get(0, 1), -1.0 / (h * h));
        assert_eq!(op.get(0, 2), 0.0);
    }

    #[test]
    fn schrodinger_gaussian_diagonal() {
        let d = Domain::interval(-6.0, 6.0).unwrap();
        let g = Grid::uniform(&d, 11).unwrap();
        let op = assemble_schrodinger(&d, &WeightFunction::quadratic(1, 0.5), &g).unwrap();
        let h = g.spacing()[0];
        for i in 0..11 {
            let x = g.coordinate(0, i);
            let expected = 2.0 / (h * h) + x * x / 4.0 - 0.5;
            assert!((op.get(i, i) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn periodic_row_sums_vanish() {
        let t = Domain::torus(vec![2.0 * PI]).unwrap();
        let g = Grid::uniform(&t, 16).unwrap();
        let op = assemble_schrodinger(&t, &WeightFunction::constant(1, 0.0), &g).unwrap();
        let ones = vec![1.0; 16];
        let mut y = vec![0.0; 16];
        op.matvec(&ones, &mut y);
        assert!(y.iter().all(|v| v.abs() < 1e-12));
        assert!(op.as_tridiagonal().is_none());
    }

    #[test]
    fn weighted_mass_and_symmetry() {
        let d = Domain::box_domain(vec![-1.0, -2.0], vec![1.0, 2.0]).unwrap();
        let g = Grid::new(&d, vec![6, 9]).unwrap();
        let pair = assemble_weighted(&d, &WeightFunction::constant(2, libm::log(2.0)), &g).unwrap();
        let vol = g.cell_volume();
        assert!(pair.mass.iter().all(|m| (m - 0.5 * vol).abs() < 1e-15));
        let pair = assemble_weighted(&d, &WeightFunction::quadratic(2, 0.25), &g).unwrap();
        assert!(pair.stiffness.is_exactly_symmetric());
        assert!(pair.reduced().is_exactly_symmetric());

        let t = Domain::torus(vec![1.0, 2.0]).unwrap();
        let g = Grid::new(&t, vec![5, 6]).unwrap();
        let f = WeightFunction::affine_quadratic(0.3, vec![0.1, -0.2], 0.0);
        let pair = assemble_weighted(&t, &f, &g).unwrap();
        assert!(pair.stiffness.is_exactly_symmetric());
        let ones = vec![1.0; g.len()];
        let mut y = vec![0.0; g.len()];
        pair.stiffness.matvec(&ones, &mut y);
        assert!(y.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn weighted_stiffness_is_positive_semidefinite() {
        let d = Domain::box_domain(vec![-2.0, -2.0], vec![2.0, 2.0]).unwrap();
        let g = Grid::uniform(&d, 7).unwrap();
        let pair = assemble_weighted(&d, &WeightFunction::quadratic(2, 0.25), &g).unwrap();
        let n = g.len();
        let mut state = 99u64;
        for _ in 0..50 {
            let v: Vec<f64> = (0..n)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
                })
                .collect();
            let mut y = vec![0.0; n];
            pair.stiffness.matvec(&v, &mut y);
            let q: f64 = v.iter().zip(&y).map(|(a, b)| a * b).sum();
            let vv: f64 = v.iter().map(|a| a * a).sum();
            assert!(q >= -1e-10 * vv);
        }
    }

    #[test]
    fn mismatched_grid_is_rejected() {
        let d = Domain::interval(0.0, 1.0).unwrap();
        let other = Domain::interval(0.0, 2.0).unwrap();
        let g = Grid::uniform(&other, 8).unwrap();
        let f = WeightFunction::constant(1, 0.0);
        assert!(assemble_schrodinger(&d, &f, &g).is_err());
        let b = Domain::box_domain(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            assemble_schrodinger(&b, &WeightFunction::constant(2, 0.0), &g),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn consistency_order_needs_three_grids() {
        let d = Domain::interval(0.0, PI).unwrap();
        let g = Grid::uniform(&d, 10).unwrap();
        let r = stencil_consistency_order(&d, &WeightFunction::constant(1, 0.0), &[g.clone(), g.refined()]);
        assert!(matches!(r, Err(Error::Arity { needed: 3, found: 2 })));
    }

    #[test]
    fn consistency_order_is_two() {
        let f1 = WeightFunction::constant(1, 0.0);
        let d = Domain::interval(0.0, PI).unwrap();
        let g = Grid::uniform(&d, 20).unwrap();
        let order = stencil_consistency_order(&d, &f1, &[g.clone(), g.refined(), g.refined().refined()]).unwrap();
        assert!((1.8..=2.2).contains(&order), "{order}");

        let f2 = WeightFunction::constant(2, 0.0);
        let b = Domain::box_domain(vec![0.0, 0.0], vec![PI, PI]).unwrap();
        let g = Grid::uniform(&b, 7).unwrap();
        let order = stencil_consistency_order(&b, &f2, &[g.clone(), g.refined(), g.refined().refined()]).unwrap();
        assert!((1.8..=2.2).contains(&order), "{order}");

        let t = Domain::torus(vec![2.0 * PI, 2.0 * PI]).unwrap();
        let g = Grid::uniform(&t, 8).unwrap();
        let order = stencil_consistency_order(&t, &f2, &[g.clone(), g.refined(), g.refined().refined()]).unwrap();
        assert!((1.8..=2.2).contains(&order), "{order}");
    }
}
