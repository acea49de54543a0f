//! The hierarchical quasi-interpolant `Q_H` and its local error bounds.

use rayon::prelude::*;

use crate::error::{QiError, QiResult};
use crate::grid::{Degrees, Grid2, Rect, UniformGrid};
use crate::mesh::{Cell, HierarchicalMesh};
use crate::provider::{HermiteProvider, SamplePoint};
use crate::scalar::Scalar;
use crate::tensor::{
    bound_constants, check_domain, check_orders, coefficient_box, functional_support, BoundConstants, HermiteNorms,
    TensorFunctional, TensorSpline,
};
use crate::thb::{active_indices, refine_patch, truncate_in_place, ActiveIndexSet, ThbBasis};

/// A spline of `S_H` given by one coefficient per active index.
///
/// Besides the coefficients, every level keeps the accumulated representation
/// of the coarser contributions in its own B-spline basis, so evaluation on an
/// active cell of level `k` is a plain tensor evaluation.
#[derive(Debug, Clone)]
pub struct HierSpline<T> {
    pub mesh: HierarchicalMesh<T>,
    pub degrees: Degrees,
    pub active: ActiveIndexSet,
    /// `coefficients[l][n]` belongs to `active.levels[l][n]`.
    pub coefficients: Vec<Vec<T>>,
    levels: Vec<TensorSpline<T>>,
}

impl<T: Scalar> HierSpline<T> {
    /// Builds the spline from a coefficient rule evaluated on every active `(level, j, i)`.
    pub fn from_coefficients<F>(mesh: &HierarchicalMesh<T>, degrees: Degrees, coef: F) -> QiResult<Self>
    where
        F: Fn(usize, i64, i64) -> QiResult<T> + Sync,
    {
        let active = active_indices(mesh, degrees);
        let coefficients = active
            .levels
            .iter()
            .enumerate()
            .map(|(l, ids)| ids.par_iter().map(|&(j, i)| coef(l, j, i)).collect::<QiResult<Vec<T>>>())
            .collect::<QiResult<Vec<_>>>()?;
        Self::assemble(mesh, degrees, active, coefficients)
    }

    fn assemble(
        mesh: &HierarchicalMesh<T>,
        degrees: Degrees,
        active: ActiveIndexSet,
        coefficients: Vec<Vec<T>>,
    ) -> QiResult<Self> {
        let mut levels: Vec<TensorSpline<T>> = Vec::with_capacity(mesh.depth());
        for l in 0..mesh.depth() {
            let grid = mesh.grid(l);
            let full = coefficient_box(&grid, degrees);
            let mut c = Grid2::filled(full, T::zero());
            if let Some(prev) = levels.last() {
                let mut fine = refine_patch(mesh, degrees, l - 1, &prev.coeffs)?;
                truncate_in_place(mesh, degrees, l, &mut fine);
                for ((j, i), v) in fine.iter() {
                    c.set(j, i, v);
                }
            }
            for (&(j, i), &v) in active.levels[l].iter().zip(&coefficients[l]) {
                *c.at_mut(j, i) = c.at(j, i) + v;
            }
            levels.push(TensorSpline::new(grid, degrees, c)?);
        }
        Ok(Self { mesh: mesh.clone(), degrees, active, coefficients, levels })
    }

    /// `dim(S_H)`.
    pub fn dim(&self) -> usize {
        self.active.dim()
    }

    pub fn coefficient(&self, level: usize, j: i64, i: i64) -> Option<T> {
        let ids = self.active.levels.get(level)?;
        ids.binary_search(&(j, i)).ok().map(|n| self.coefficients[level][n])
    }

    /// Accumulated level-`l` representation, valid on active cells of level `l`.
    pub fn level_spline(&self, level: usize) -> &TensorSpline<T> {
        &self.levels[level]
    }

    pub fn eval_in_cell(&self, c: Cell, tx: T, ty: T, r: usize, s: usize) -> T {
        self.levels[c.level].eval_in_cell(c.i, c.j, tx, ty, r, s)
    }

    pub fn eval(&self, x: T, y: T, r: usize, s: usize) -> QiResult<T> {
        check_orders(self.degrees, r, s)?;
        check_domain(&self.mesh.domain(), x, y)?;
        let c = self.mesh.locate(x, y);
        let (tx, ty) = self.mesh.local_coords(c, x, y);
        Ok(self.eval_in_cell(c, tx, ty, r, s))
    }

    /// Evaluation through the THB functions themselves.
    pub fn eval_thb(&self, basis: &ThbBasis<T>, x: T, y: T, r: usize, s: usize) -> QiResult<T> {
        Ok(basis
            .eval(x, y, r, s)?
            .into_iter()
            .map(|(fid, v)| {
                let f = &basis.functions[fid];
                self.coefficient(f.level, f.j, f.i).unwrap_or(T::zero()) * v
            })
            .sum())
    }

    /// The same spline in the B-spline basis of the finest level.
    pub fn finest_expansion(&self, basis: &ThbBasis<T>) -> QiResult<TensorSpline<T>> {
        let top = self.mesh.depth() - 1;
        let grid = self.mesh.grid(top);
        let mut c = Grid2::filled(coefficient_box(&grid, self.degrees), T::zero());
        for f in &basis.functions {
            let lambda = self.coefficient(f.level, f.j, f.i).unwrap_or(T::zero());
            for ((j, i), v) in f.finest().iter() {
                *c.at_mut(j, i) = c.at(j, i) + lambda * v;
            }
        }
        TensorSpline::new(grid, self.degrees, c)
    }
}

/// `lambda_J^l(f)` with level-`l` step sizes, pulling data through the provider.
pub fn level_functional<T: Scalar, P: HermiteProvider<T> + ?Sized>(
    functional: &TensorFunctional<T>,
    grid: &UniformGrid<T>,
    provider: &P,
    j: i64,
    i: i64,
) -> QiResult<T> {
    functional.apply(grid.hx(), grid.hy(), |q, r| {
        provider.hermite(&SamplePoint::lattice(grid, i + 1 + r as i64, j + 1 + q as i64))
    })
}

/// `Q_H(f)`: only the functionals of active indices are evaluated.
pub fn hierarchical_qi<T: Scalar, P: HermiteProvider<T> + ?Sized>(
    mesh: &HierarchicalMesh<T>,
    degrees: Degrees,
    provider: &P,
) -> QiResult<HierSpline<T>> {
    let functional = TensorFunctional::new(degrees)?;
    HierSpline::from_coefficients(mesh, degrees, |l, j, i| {
        level_functional(&functional, &mesh.grid(l), provider, j, i)
    })
}

/// Tensor `Q` on one uniform grid, pulling data through the provider.
pub fn tensor_qi_from<T: Scalar, P: HermiteProvider<T> + ?Sized>(
    grid: &UniformGrid<T>,
    degrees: Degrees,
    provider: &P,
) -> QiResult<TensorSpline<T>> {
    let functional = TensorFunctional::new(degrees)?;
    let b = coefficient_box(grid, degrees);
    let ids: Vec<(i64, i64)> = b.iter().collect();
    let values = ids
        .par_iter()
        .map(|&(j, i)| level_functional(&functional, grid, provider, j, i))
        .collect::<QiResult<Vec<T>>>()?;
    let mut it = values.into_iter();
    TensorSpline::new(*grid, degrees, Grid2::from_fn(b, |_, _| it.next().unwrap()))
}

/// The set `C` of a cell: its functional supports joined with the cell, and
/// the enclosing axis-aligned rectangle `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionC<T> {
    pub cell: Rect<T>,
    pub parts: Vec<Rect<T>>,
    pub bounding: Rect<T>,
}

impl<T: Scalar> RegionC<T> {
    /// `H_x(C)`.
    pub fn width(&self) -> T {
        self.bounding.width()
    }

    /// `H_y(C)`.
    pub fn height(&self) -> T {
        self.bounding.height()
    }

    /// Maximum of `|g|` sampled on an `n x n` grid over the cell and every part.
    pub fn sampled_max(&self, n: usize, g: impl Fn(T, T) -> T) -> T {
        let mut best = T::zero();
        for r in std::iter::once(&self.cell).chain(&self.parts) {
            best = best.max(sampled_max_rect(r, n, &g));
        }
        best
    }
}

/// Maximum of `|g|` on an `n x n` grid including the edges of `r`.
pub fn sampled_max_rect<T: Scalar>(r: &Rect<T>, n: usize, g: impl Fn(T, T) -> T) -> T {
    let steps = T::from_int((n.max(2) - 1) as i64);
    let mut best = T::zero();
    for a in 0..n.max(2) {
        let y = r.y0 + r.height() * T::from_int(a as i64) / steps;
        for b in 0..n.max(2) {
            let x = r.x0 + r.width() * T::from_int(b as i64) / steps;
            best = best.max(g(x, y).abs());
        }
    }
    best
}

pub fn region_c<T: Scalar>(basis: &ThbBasis<T>, c: Cell) -> RegionC<T> {
    let cell = basis.mesh.cell_rect(c);
    let mut bounding = cell;
    let mut parts = Vec::new();
    for &fid in basis.functions_on(c) {
        let f = &basis.functions[fid];
        let r = functional_support(f.j, f.i, basis.degrees, &basis.mesh.grid(f.level));
        bounding = bounding.union(&r);
        parts.push(r);
    }
    RegionC { cell, parts, bounding }
}

/// Constants of the local bounds for a mesh of admissibility class `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorConstants<T> {
    pub m: usize,
    pub kappa: BoundConstants<T>,
    /// `H_x(C) <= w1 h_{x,k}`, with `w_i = 2^{m-1} (2 d_i - 1)`.
    pub w1: T,
    pub w2: T,
    /// `2^{m-1} max(1, h_{x,0}, h_{y,0})`.
    pub gamma: T,
    /// `1 + k00 + (k10 + k01 + k11) gamma`.
    pub k: T,
    pub v1: T,
    pub v2: T,
    pub v3: T,
}

impl<T: Scalar> ErrorConstants<T> {
    pub fn new(degrees: Degrees, m: usize, base: &UniformGrid<T>) -> QiResult<Self> {
        if m == 0 {
            return Err(QiError::Config { field: "m".into(), message: "admissibility class must be >= 1".into() });
        }
        let kappa = bound_constants(degrees)?;
        let p = T::from_int(1 << (m - 1));
        let w1 = p * T::from_int(2 * degrees.d1 as i64 - 1);
        let w2 = p * T::from_int(2 * degrees.d2 as i64 - 1);
        let b = base.at_level(0);
        let gamma = p * T::one().max(b.hx()).max(b.hy());
        let k = T::one() + kappa.k00 + (kappa.k10 + kappa.k01 + kappa.k11) * gamma;
        let e1 = w1.powi(degrees.d1 as i32 + 1);
        let e2 = w2.powi(degrees.d2 as i32 + 1);
        Ok(Self { m, kappa, w1, w2, gamma, k, v1: k * e1, v2: k * e2, v3: k * e1 * e2 })
    }

    /// `k_m = max(0, k - m + 1)`.
    pub fn lowest_level(&self, k: usize) -> usize {
        (k + 1).saturating_sub(self.m)
    }

    /// Bound on `||Q_H f||_c` for a cell of level `k`.
    pub fn cell_bound(&self, hx: T, hy: T, norms: &HermiteNorms<T>) -> T {
        let p = T::from_int(1 << (self.m - 1));
        let k = &self.kappa;
        k.k00 * norms.f + p * hx * k.k10 * norms.fx + p * hy * k.k01 * norms.fy + p * p * hx * hy * k.k11 * norms.fxy
    }

    /// Bound on `||f - Q_H f||_c` for a cell of level `k`.
    pub fn error_bound(&self, degrees: Degrees, hx: T, hy: T, norms: &HighOrderNorms<T>) -> T {
        let ex = hx.powi(degrees.d1 as i32 + 1);
        let ey = hy.powi(degrees.d2 as i32 + 1);
        self.v1 * norms.fx_top * ex + self.v2 * norms.fy_top * ey + self.v3 * norms.fxy_top * ex * ey
    }
}

/// Sup-norms of `f^{(d1+1,0)}`, `f^{(0,d2+1)}`, `f^{(d1+1,d2+1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HighOrderNorms<T> {
    pub fx_top: T,
    pub fy_top: T,
    pub fxy_top: T,
}

pub fn cell_bound<T: Scalar>(
    mesh: &HierarchicalMesh<T>,
    consts: &ErrorConstants<T>,
    c: Cell,
    norms: &HermiteNorms<T>,
) -> T {
    let g = mesh.grid(c.level);
    consts.cell_bound(g.hx(), g.hy(), norms)
}

pub fn error_bound<T: Scalar>(
    mesh: &HierarchicalMesh<T>,
    degrees: Degrees,
    consts: &ErrorConstants<T>,
    c: Cell,
    norms: &HighOrderNorms<T>,
) -> T {
    let g = mesh.grid(c.level);
    consts.error_bound(degrees, g.hx(), g.hy(), norms)
}
