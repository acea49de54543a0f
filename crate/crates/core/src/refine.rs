//! Automatic adaptive refinement driven by a pointwise per-cell error indicator.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{QiError, QiResult};
use crate::grid::UniformGrid;
use crate::hqi::HierSpline;
use crate::mesh::{Cell, HierarchicalMesh};
use crate::scalar::Scalar;
use crate::tensor::TensorSpline;

/// Sample points on a level lattice: `(x_p, y_q)` of the level-`level` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePoints<T> {
    pub level: usize,
    pub indices: Vec<(i64, i64)>,
    pub coords: Vec<(T, T)>,
}

impl<T: Scalar> SamplePoints<T> {
    /// All vertices of the level grid inside the domain.
    pub fn lattice(base: &UniformGrid<T>, level: usize) -> Self {
        let g = base.at_level(level);
        let mut indices = Vec::with_capacity((g.n1() + 1) * (g.n2() + 1));
        for q in 0..=g.n2() as i64 {
            for p in 0..=g.n1() as i64 {
                indices.push((p, q));
            }
        }
        let coords = indices.iter().map(|&(p, q)| (g.x(p), g.y(q))).collect();
        Self { level, indices, coords }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Settings of the refinement loop.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementConfig<T> {
    /// Maximum number of levels `K`.
    pub max_levels: usize,
    pub epsilon: T,
    pub points: SamplePoints<T>,
}

impl<T: Scalar> RefinementConfig<T> {
    /// `P` = vertices of the level-`(K-1)` grid.
    pub fn new(base: &UniformGrid<T>, max_levels: usize, epsilon: T) -> QiResult<Self> {
        let cfg = Self { max_levels, epsilon, points: SamplePoints::lattice(base, max_levels.saturating_sub(1)) };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> QiResult<()> {
        if self.max_levels == 0 {
            return Err(QiError::Config { field: "levels".into(), message: "must be at least 1".into() });
        }
        if self.epsilon.is_nan() || self.epsilon < T::zero() {
            return Err(QiError::Config { field: "epsilon".into(), message: "must be non-negative".into() });
        }
        if self.points.is_empty() {
            return Err(QiError::Config { field: "points".into(), message: "sample set is empty".into() });
        }
        Ok(())
    }
}

/// `delta(F_H; c)` for every active cell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CellIndicator<T> {
    pub values: BTreeMap<Cell, T>,
}

impl<T: Scalar> CellIndicator<T> {
    pub fn max(&self) -> T {
        self.values.values().fold(T::zero(), |a, &b| a.max(b))
    }

    pub fn exceeding(&self, eps: T) -> impl Iterator<Item = Cell> + '_ {
        self.values.iter().filter(move |(_, &v)| v > eps).map(|(c, _)| *c)
    }
}

/// The active cell a sample point belongs to; on shared edges the smallest
/// `(level, i, j)` wins.
pub fn assign_point<T: Scalar>(mesh: &HierarchicalMesh<T>, level: usize, p: i64, q: i64) -> Option<Cell> {
    let top = level.max(mesh.depth() - 1);
    let (u, v) = (p << (top - level), q << (top - level));
    for l in 0..mesh.depth() {
        let g = mesh.grid(l);
        let w = 1i64 << (top - l);
        let cand = |t: i64, n: usize| {
            let c = t.div_euclid(w);
            let mut out = vec![c];
            if t.rem_euclid(w) == 0 {
                out.insert(0, c - 1);
            }
            out.retain(|&k| k >= 0 && k < n as i64);
            out
        };
        let xs = cand(u, g.n1());
        let ys = cand(v, g.n2());
        // lexicographic in (i, j) within one level
        for &i in &xs {
            for &j in &ys {
                let c = Cell::new(l, i, j);
                if mesh.is_active(c) {
                    return Some(c);
                }
            }
        }
    }
    None
}

/// Per-cell maxima of `|F_H - f|` over the sample points.
pub fn cell_errors<T: Scalar>(spline: &HierSpline<T>, points: &SamplePoints<T>, f_values: &[T]) -> QiResult<CellIndicator<T>> {
    if f_values.len() != points.len() {
        return Err(QiError::MalformedSamples(format!(
            "{} values for {} sample points",
            f_values.len(),
            points.len()
        )));
    }
    let mesh = &spline.mesh;
    let errs = (0..points.len())
        .into_par_iter()
        .map(|n| {
            let (p, q) = points.indices[n];
            let (x, y) = points.coords[n];
            let c = assign_point(mesh, points.level, p, q).ok_or(QiError::OutOfDomain { x: x.as_f64(), y: y.as_f64() })?;
            let (tx, ty) = mesh.local_coords(c, x, y);
            Ok((c, (spline.eval_in_cell(c, tx, ty, 0, 0) - f_values[n]).abs()))
        })
        .collect::<QiResult<Vec<_>>>()?;
    let mut values: BTreeMap<Cell, T> = mesh.all_active_cells().into_iter().map(|c| (c, T::zero())).collect();
    for (c, e) in errs {
        let v = values.entry(c).or_insert(T::zero());
        *v = v.max(e);
    }
    Ok(CellIndicator { values })
}

/// Cells to split: those above `eps` and their king-move neighbours (same
/// level if active, else the coarser active cell covering that position).
pub fn marked_cells<T: Scalar>(mesh: &HierarchicalMesh<T>, indicator: &CellIndicator<T>, eps: T) -> BTreeSet<Cell> {
    let mut marked = BTreeSet::new();
    for c in indicator.exceeding(eps) {
        marked.insert(c);
        let g = mesh.grid(c.level);
        for dj in -1..=1i64 {
            for di in -1..=1i64 {
                let (i, j) = (c.i + di, c.j + dj);
                if (di, dj) == (0, 0) || i < 0 || j < 0 || i >= g.n1() as i64 || j >= g.n2() as i64 {
                    continue;
                }
                let n = Cell::new(c.level, i, j);
                if mesh.is_active(n) {
                    marked.insert(n);
                } else if !mesh.in_domain(c.level, i, j) {
                    if let Some(a) = (0..c.level).rev().map(|l| n.ancestor(l)).find(|a| mesh.is_active(*a)) {
                        marked.insert(a);
                    }
                }
            }
        }
    }
    marked
}

pub fn mark_and_split<T: Scalar>(
    mesh: &HierarchicalMesh<T>,
    indicator: &CellIndicator<T>,
    eps: T,
) -> QiResult<(HierarchicalMesh<T>, BTreeSet<Cell>)> {
    let marked = marked_cells(mesh, indicator, eps);
    if marked.is_empty() {
        return Ok((mesh.clone(), marked));
    }
    Ok((mesh.split(&marked)?, marked))
}

/// `factor * max_P |F - f|` for a tensor approximation `F`.
pub fn epsilon_from_tensor<T: Scalar>(
    spline: &TensorSpline<T>,
    points: &SamplePoints<T>,
    f: impl Fn(T, T) -> T + Sync,
    factor: T,
) -> QiResult<T> {
    let m = points
        .coords
        .par_iter()
        .map(|&(x, y)| Ok((spline.eval(x, y, 0, 0)? - f(x, y)).abs()))
        .collect::<QiResult<Vec<T>>>()?
        .into_iter()
        .fold(T::zero(), T::max);
    Ok(factor * m)
}

/// One pass of the refinement loop.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord<T> {
    pub iteration: usize,
    pub levels: usize,
    pub dim: usize,
    pub max_delta: T,
    pub cells_split: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Tolerance,
    LevelLimit,
}

#[derive(Debug, Clone)]
pub struct AdaptiveResult<T> {
    pub mesh: HierarchicalMesh<T>,
    pub spline: HierSpline<T>,
    pub trace: Vec<IterationRecord<T>>,
    pub stop: StopReason,
}

/// Builds, measures, marks and splits until every `delta <= eps` or `K`
/// approximations have been built. `observe` sees every built spline.
pub fn adaptive_refine<T, B, F, O>(
    initial: HierarchicalMesh<T>,
    config: &RefinementConfig<T>,
    mut build: B,
    f: F,
    mut observe: O,
) -> QiResult<AdaptiveResult<T>>
where
    T: Scalar,
    B: FnMut(&HierarchicalMesh<T>) -> QiResult<HierSpline<T>>,
    F: Fn(T, T) -> T + Sync,
    O: FnMut(&IterationRecord<T>, &HierSpline<T>) -> QiResult<()>,
{
    config.validate()?;
    let f_values: Vec<T> = config.points.coords.par_iter().map(|&(x, y)| f(x, y)).collect();
    let mut mesh = initial;
    let mut trace = Vec::new();
    for iteration in 0.. {
        let spline = build(&mesh)?;
        let ind = cell_errors(&spline, &config.points, &f_values)?;
        let mut rec = IterationRecord {
            iteration,
            levels: mesh.depth(),
            dim: spline.dim(),
            max_delta: ind.max(),
            cells_split: 0,
        };
        let stop = if rec.max_delta <= config.epsilon {
            Some(StopReason::Tolerance)
        } else if iteration + 1 >= config.max_levels {
            Some(StopReason::LevelLimit)
        } else {
            None
        };
        let next = match stop {
            Some(_) => None,
            None => {
                let (next, marked) = mark_and_split(&mesh, &ind, config.epsilon)?;
                rec.cells_split = marked.len();
                Some(next)
            }
        };
        observe(&rec, &spline)?;
        trace.push(rec);
        match (stop, next) {
            (Some(stop), _) => return Ok(AdaptiveResult { mesh, spline, trace, stop }),
            (None, Some(n)) => mesh = n,
            (None, None) => unreachable!(),
        }
    }
    unreachable!()
}
