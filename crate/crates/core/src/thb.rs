//! Hierarchical B-spline bookkeeping and the truncated (THB) basis.
//!
//! Supports are handled as integer boxes of cells: `B_J^l`, `J = (j, i)`, covers
//! the level-`l` cells `[i, i+d1] x [j, j+d2]`, clipped to the domain. A THB
//! function keeps its coefficient patch at every level from its own level to
//! the finest one; on an active cell of level `k` it coincides with the level-`k`
//! patch.

use std::collections::{BTreeMap, HashMap};

use crate::bspline::{cell_basis, subdivision_coeffs};
use crate::error::{QiError, QiResult};
use crate::grid::{Degrees, Grid2, IndexBox};
use crate::mesh::{Cell, HierarchicalMesh};
use crate::scalar::Scalar;
use crate::tensor::{check_domain, check_orders, coefficient_box};

/// Cells covered by the support of `B_J` at its level.
pub fn support_cells(degrees: Degrees, j: i64, i: i64) -> IndexBox {
    IndexBox::new(i, i + degrees.d1 as i64, j, j + degrees.d2 as i64)
}

/// Indices of the basis functions non-zero on cell `(ci, cj)`.
pub fn cell_functions_box(degrees: Degrees, ci: i64, cj: i64) -> IndexBox {
    IndexBox::new(ci - degrees.d1 as i64, ci, cj - degrees.d2 as i64, cj)
}

/// `supp B_J^l ⊆ Omega^l` and `supp B_J^l ⊄ Omega^{l+1}`.
pub fn is_active_index<T: Scalar>(mesh: &HierarchicalMesh<T>, degrees: Degrees, level: usize, j: i64, i: i64) -> bool {
    if level >= mesh.depth() || !coefficient_box(&mesh.grid(level), degrees).contains(i, j) {
        return false;
    }
    let supp = support_cells(degrees, j, i);
    mesh.box_in_domain(level, &supp) && !mesh.box_refined(level, &supp)
}

/// The active index sets `A^l`, one sorted list of `(j, i)` per level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveIndexSet {
    pub levels: Vec<Vec<(i64, i64)>>,
}

impl ActiveIndexSet {
    /// `dim(S_H) = sum_l #A^l`.
    pub fn dim(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, level: usize, j: i64, i: i64) -> bool {
        self.levels.get(level).is_some_and(|v| v.binary_search(&(j, i)).is_ok())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, i64)> + '_ {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(l, v)| v.iter().map(move |&(j, i)| (l, j, i)))
    }
}

pub fn active_indices<T: Scalar>(mesh: &HierarchicalMesh<T>, degrees: Degrees) -> ActiveIndexSet {
    let levels = (0..mesh.depth())
        .map(|l| {
            coefficient_box(&mesh.grid(l), degrees)
                .iter()
                .filter(|&(j, i)| is_active_index(mesh, degrees, l, j, i))
                .collect()
        })
        .collect();
    ActiveIndexSet { levels }
}

/// Representation at level `l + 1` of a level-`l` coefficient patch.
///
/// Children falling outside the level-`(l+1)` index range vanish on the domain
/// and are dropped.
pub fn refine_patch<T: Scalar>(
    mesh: &HierarchicalMesh<T>,
    degrees: Degrees,
    level: usize,
    coarse: &Grid2<T>,
) -> QiResult<Grid2<T>> {
    let (d1, d2) = (degrees.d1 as i64, degrees.d2 as i64);
    let sx = subdivision_coeffs::<T>(degrees.d1)?;
    let sy = subdivision_coeffs::<T>(degrees.d2)?;
    let b = coarse.bounds();
    let full = coefficient_box(&mesh.grid(level + 1), degrees);
    let fine_box = IndexBox::new(2 * b.i0, 2 * b.i1 + d1 + 1, 2 * b.j0, 2 * b.j1 + d2 + 1).intersect(&full);
    let mut fine = Grid2::filled(fine_box, T::zero());
    if fine_box.is_empty() {
        return Ok(fine);
    }
    for ((j, i), v) in coarse.iter() {
        if v == T::zero() {
            continue;
        }
        for (ky, &wy) in sy.iter().enumerate() {
            let fj = 2 * j + ky as i64;
            if fj < fine_box.j0 || fj > fine_box.j1 {
                continue;
            }
            for (kx, &wx) in sx.iter().enumerate() {
                let fi = 2 * i + kx as i64;
                if fi < fine_box.i0 || fi > fine_box.i1 {
                    continue;
                }
                *fine.at_mut(fj, fi) = fine.at(fj, fi) + wx * wy * v;
            }
        }
    }
    Ok(fine)
}

/// `trunc^{l+1}`: zeroes the coefficients of level-`(l+1)` functions whose
/// support lies in `Omega^{l+1}`. `fine` holds coefficients over the level
/// `l + 1` basis.
pub fn truncate<T: Scalar>(mesh: &HierarchicalMesh<T>, degrees: Degrees, level: usize, fine: &Grid2<T>) -> Grid2<T> {
    let mut out = fine.clone();
    truncate_in_place(mesh, degrees, level + 1, &mut out);
    out
}

/// Zeroes coefficients of level-`q` functions supported inside `Omega^q`.
pub(crate) fn truncate_in_place<T: Scalar>(mesh: &HierarchicalMesh<T>, degrees: Degrees, q: usize, patch: &mut Grid2<T>) {
    let b = patch.bounds();
    for (j, i) in b.iter() {
        if patch.at(j, i) != T::zero() && mesh.box_in_domain(q, &support_cells(degrees, j, i)) {
            patch.set(j, i, T::zero());
        }
    }
}

/// Shrinks a patch to the bounding box of its non-zero entries.
fn shrink<T: Scalar>(patch: Grid2<T>) -> Grid2<T> {
    let mut bb: Option<IndexBox> = None;
    for ((j, i), v) in patch.iter() {
        if v != T::zero() {
            bb = Some(match bb {
                None => IndexBox::new(i, i, j, j),
                Some(b) => IndexBox::new(b.i0.min(i), b.i1.max(i), b.j0.min(j), b.j1.max(j)),
            });
        }
    }
    match bb {
        None => Grid2::filled(IndexBox::new(0, -1, 0, -1), T::zero()),
        Some(b) if b == patch.bounds() => patch,
        Some(b) => Grid2::from_fn(b, |j, i| patch.at(j, i)),
    }
}

/// A truncated hierarchical B-spline `T_J^l`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThbFunction<T> {
    pub level: usize,
    pub j: i64,
    pub i: i64,
    /// `patches[q - level]`: coefficients over the level-`q` B-splines after
    /// the truncations up to level `q`.
    pub patches: Vec<Grid2<T>>,
}

impl<T: Scalar> ThbFunction<T> {
    pub fn patch(&self, q: usize) -> Option<&Grid2<T>> {
        q.checked_sub(self.level).and_then(|k| self.patches.get(k))
    }

    /// Value (or derivative) on an active cell at local coordinates `(tx, ty)`.
    pub fn eval_in_cell(&self, mesh: &HierarchicalMesh<T>, degrees: Degrees, c: Cell, tx: T, ty: T, r: usize, s: usize) -> T {
        let Some(p) = self.patch(c.level) else { return T::zero() };
        let local = cell_functions_box(degrees, c.i, c.j).intersect(&p.bounds());
        if local.is_empty() {
            return T::zero();
        }
        let (d1, d2) = (degrees.d1 as i64, degrees.d2 as i64);
        let bx = cell_basis(degrees.d1, tx, r);
        let by = cell_basis(degrees.d2, ty, s);
        let mut acc = T::zero();
        for (j, i) in local.iter() {
            let v = p.at(j, i);
            if v != T::zero() {
                acc = acc + v * bx[(i - c.i + d1) as usize] * by[(j - c.j + d2) as usize];
            }
        }
        let g = mesh.grid(c.level);
        acc / (g.hx().powi(r as i32) * g.hy().powi(s as i32))
    }

    pub fn eval(&self, mesh: &HierarchicalMesh<T>, degrees: Degrees, x: T, y: T, r: usize, s: usize) -> QiResult<T> {
        check_orders(degrees, r, s)?;
        check_domain(&mesh.domain(), x, y)?;
        let c = mesh.locate(x, y);
        let (tx, ty) = mesh.local_coords(c, x, y);
        Ok(self.eval_in_cell(mesh, degrees, c, tx, ty, r, s))
    }

    /// Whether the function is non-zero on the interior of an active cell.
    ///
    /// THB coefficients are non-negative, so a non-zero entry whose support
    /// covers the cell is enough.
    pub fn nonzero_on(&self, degrees: Degrees, c: Cell) -> bool {
        let Some(p) = self.patch(c.level) else { return false };
        let local = cell_functions_box(degrees, c.i, c.j).intersect(&p.bounds());
        !local.is_empty() && local.iter().any(|(j, i)| p.at(j, i) != T::zero())
    }

    /// Representation in the finest level's B-spline basis.
    pub fn finest(&self) -> &Grid2<T> {
        self.patches.last().expect("at least one patch")
    }
}

/// Builds `T_J^l = trunc^{M-1}(... trunc^{l+1}(B_J^l))`.
pub fn build_thb<T: Scalar>(
    mesh: &HierarchicalMesh<T>,
    degrees: Degrees,
    level: usize,
    j: i64,
    i: i64,
) -> QiResult<ThbFunction<T>> {
    if !is_active_index(mesh, degrees, level, j, i) {
        return Err(QiError::InactiveIndex { level, j, i });
    }
    let mut patches = Vec::with_capacity(mesh.depth() - level);
    patches.push(Grid2::filled(IndexBox::new(i, i, j, j), T::one()));
    for q in level + 1..mesh.depth() {
        let mut next = refine_patch(mesh, degrees, q - 1, patches.last().unwrap())?;
        truncate_in_place(mesh, degrees, q, &mut next);
        patches.push(shrink(next));
    }
    Ok(ThbFunction { level, j, i, patches })
}

/// Indices of the THB functions non-zero on one cell, grouped by level.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LocalActiveSet {
    pub levels: BTreeMap<usize, Vec<(i64, i64)>>,
}

impl LocalActiveSet {
    pub fn len(&self) -> usize {
        self.levels.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn min_level(&self) -> Option<usize> {
        self.levels.keys().next().copied()
    }

    pub fn max_level(&self) -> Option<usize> {
        self.levels.keys().next_back().copied()
    }
}

/// The full THB basis of a mesh with per-cell lookup of non-zero functions.
#[derive(Debug, Clone)]
pub struct ThbBasis<T> {
    pub mesh: HierarchicalMesh<T>,
    pub degrees: Degrees,
    pub functions: Vec<ThbFunction<T>>,
    cell_functions: HashMap<Cell, Vec<usize>>,
}

impl<T: Scalar> ThbBasis<T> {
    pub fn new(mesh: &HierarchicalMesh<T>, degrees: Degrees) -> QiResult<Self> {
        use rayon::prelude::*;
        let active = active_indices(mesh, degrees);
        let ids: Vec<(usize, i64, i64)> = active.iter().collect();
        let functions = ids
            .par_iter()
            .map(|&(l, j, i)| build_thb(mesh, degrees, l, j, i))
            .collect::<QiResult<Vec<_>>>()?;
        let mut cell_functions: HashMap<Cell, Vec<usize>> = HashMap::new();
        for (fid, f) in functions.iter().enumerate() {
            for (k, p) in f.patches.iter().enumerate() {
                let q = f.level + k;
                for ((j, i), v) in p.iter() {
                    if v == T::zero() {
                        continue;
                    }
                    for (cj, ci) in support_cells(degrees, j, i).iter() {
                        let c = Cell::new(q, ci, cj);
                        if mesh.is_active(c) {
                            cell_functions.entry(c).or_default().push(fid);
                        }
                    }
                }
            }
        }
        for v in cell_functions.values_mut() {
            v.sort_unstable();
            v.dedup();
        }
        Ok(Self { mesh: mesh.clone(), degrees, functions, cell_functions })
    }

    pub fn dim(&self) -> usize {
        self.functions.len()
    }

    /// Ids of the functions non-zero on an active cell.
    pub fn functions_on(&self, c: Cell) -> &[usize] {
        self.cell_functions.get(&c).map_or(&[], Vec::as_slice)
    }

    pub fn local_active_set(&self, c: Cell) -> LocalActiveSet {
        let mut out = LocalActiveSet::default();
        for &fid in self.functions_on(c) {
            let f = &self.functions[fid];
            out.levels.entry(f.level).or_default().push((f.j, f.i));
        }
        for v in out.levels.values_mut() {
            v.sort_unstable();
        }
        out
    }

    /// `(function id, value)` for every function non-zero on the cell containing the point.
    pub fn eval(&self, x: T, y: T, r: usize, s: usize) -> QiResult<Vec<(usize, T)>> {
        check_orders(self.degrees, r, s)?;
        check_domain(&self.mesh.domain(), x, y)?;
        let c = self.mesh.locate(x, y);
        let (tx, ty) = self.mesh.local_coords(c, x, y);
        Ok(self
            .functions_on(c)
            .iter()
            .map(|&fid| (fid, self.functions[fid].eval_in_cell(&self.mesh, self.degrees, c, tx, ty, r, s)))
            .collect())
    }

    /// Smallest `m` such that on every active cell of level `k` the non-zero
    /// functions come from levels `k - m + 1 ..= k`.
    ///
    /// The span is counted up to the cell's own level: a level-`k` cell covered
    /// only by coarser functions still needs the window to reach down to them.
    pub fn admissibility_class(&self) -> usize {
        self.mesh
            .all_active_cells()
            .into_iter()
            .map(|c| {
                let lo = self.functions_on(c).iter().map(|&f| self.functions[f].level).min();
                lo.map_or(1, |lo| c.level - lo + 1)
            })
            .max()
            .unwrap_or(1)
    }

    /// Active cells where a function is non-zero.
    pub fn support_of(&self, fid: usize) -> Vec<Cell> {
        let mut cells: Vec<Cell> = self
            .cell_functions
            .iter()
            .filter(|(_, v)| v.binary_search(&fid).is_ok())
            .map(|(c, _)| *c)
            .collect();
        cells.sort_unstable();
        cells
    }

    /// Extremes of `diam(supp T_J) / diam(c)` over active cells `c` and the
    /// functions non-zero on them.
    pub fn diameter_ratios(&self) -> (T, T) {
        let mut supports: Vec<Vec<(T, T)>> = vec![Vec::new(); self.functions.len()];
        let mut cells = self.mesh.all_active_cells();
        cells.sort_unstable();
        for &c in &cells {
            let r = self.mesh.cell_rect(c);
            for &fid in self.functions_on(c) {
                supports[fid].extend([(r.x0, r.y0), (r.x1, r.y0), (r.x0, r.y1), (r.x1, r.y1)]);
            }
        }
        let diams: Vec<T> = supports.into_iter().map(point_set_diameter).collect();
        let (mut lo, mut hi) = (T::infinity(), T::zero());
        for &c in &cells {
            let dc = self.mesh.cell_rect(c).diameter();
            for &fid in self.functions_on(c) {
                let ratio = diams[fid] / dc;
                lo = lo.min(ratio);
                hi = hi.max(ratio);
            }
        }
        (lo, hi)
    }
}

/// Diameter of a finite point set via its convex hull.
fn point_set_diameter<T: Scalar>(mut pts: Vec<(T, T)>) -> T {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 2 {
        return T::zero();
    }
    let cross = |o: (T, T), a: (T, T), b: (T, T)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(T, T)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(T, T)>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= T::zero() {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    let mut best = T::zero();
    for a in 0..hull.len() {
        for b in a + 1..hull.len() {
            best = best.max((hull[a].0 - hull[b].0).hypot(hull[a].1 - hull[b].1));
        }
    }
    best
}

/// Values of all THB functions non-zero at a point.
pub fn thb_eval<T: Scalar>(basis: &ThbBasis<T>, x: T, y: T, r: usize, s: usize) -> QiResult<Vec<(usize, T)>> {
    basis.eval(x, y, r, s)
}

pub fn admissibility_class<T: Scalar>(mesh: &HierarchicalMesh<T>, degrees: Degrees) -> QiResult<usize> {
    Ok(ThbBasis::new(mesh, degrees)?.admissibility_class())
}

pub fn local_active_set<T: Scalar>(basis: &ThbBasis<T>, c: Cell) -> LocalActiveSet {
    basis.local_active_set(c)
}
