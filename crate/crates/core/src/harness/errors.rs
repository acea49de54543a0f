//! Sup-norm errors on the fixed 301 x 301 evaluation grid.

use rayon::prelude::*;

use crate::error::QiResult;
use crate::grid::{Degrees, Rect};
use crate::harness::functions::TestFunction;
use crate::hqi::HierSpline;
use crate::scalar::Scalar;
use crate::tensor::TensorSpline;

/// Number of points per side of the evaluation grid.
pub const ERROR_GRID: usize = 301;

/// Anything that can be evaluated with partial derivatives.
pub trait Approximant<T>: Sync {
    fn degrees(&self) -> Degrees;
    fn domain(&self) -> Rect<T>;
    fn eval(&self, x: T, y: T, r: usize, s: usize) -> QiResult<T>;
}

impl<T: Scalar> Approximant<T> for TensorSpline<T> {
    fn degrees(&self) -> Degrees {
        self.degrees
    }
    fn domain(&self) -> Rect<T> {
        self.grid.domain
    }
    fn eval(&self, x: T, y: T, r: usize, s: usize) -> QiResult<T> {
        TensorSpline::eval(self, x, y, r, s)
    }
}

impl<T: Scalar> Approximant<T> for HierSpline<T> {
    fn degrees(&self) -> Degrees {
        self.degrees
    }
    fn domain(&self) -> Rect<T> {
        self.mesh.domain()
    }
    fn eval(&self, x: T, y: T, r: usize, s: usize) -> QiResult<T> {
        HierSpline::eval(self, x, y, r, s)
    }
}

/// `a + (b - a) k / (n - 1)`, `k = 0..n`, both ends included.
pub fn grid_points<T: Scalar>(domain: &Rect<T>, n: usize) -> Vec<(T, T)> {
    let steps = T::from_int(n as i64 - 1);
    let xs: Vec<T> = (0..n).map(|k| domain.x0 + domain.width() * T::from_int(k as i64) / steps).collect();
    let ys: Vec<T> = (0..n).map(|k| domain.y0 + domain.height() * T::from_int(k as i64) / steps).collect();
    ys.iter().flat_map(|&y| xs.iter().map(move |&x| (x, y))).collect()
}

/// `max |d^{(r,s)} (spline - f)|` over the evaluation grid.
pub fn sup_error<T: Scalar, A: Approximant<T> + ?Sized>(
    spline: &A,
    f: &dyn TestFunction<T>,
    r: usize,
    s: usize,
) -> QiResult<T> {
    let pts = grid_points(&spline.domain(), ERROR_GRID);
    pts.par_iter()
        .map(|&(x, y)| Ok((spline.eval(x, y, r, s)? - f.deriv(x, y, r, s)).abs()))
        .try_reduce(T::zero, |a, b| Ok(a.max(b)))
}

/// `||e||`, `||e_x||`, `||e_y||`, `||e_xy||`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorSet<T> {
    pub sup: T,
    pub x: T,
    pub y: T,
    pub xy: T,
}

pub fn error_set<T: Scalar, A: Approximant<T> + ?Sized>(spline: &A, f: &dyn TestFunction<T>) -> QiResult<ErrorSet<T>> {
    let pts = grid_points(&spline.domain(), ERROR_GRID);
    pts.par_iter()
        .map(|&(x, y)| {
            let e = |r, s| -> QiResult<T> { Ok((spline.eval(x, y, r, s)? - f.deriv(x, y, r, s)).abs()) };
            Ok(ErrorSet { sup: e(0, 0)?, x: e(1, 0)?, y: e(0, 1)?, xy: e(1, 1)? })
        })
        .try_reduce(ErrorSet::default, |a, b| {
            Ok(ErrorSet { sup: a.sup.max(b.sup), x: a.x.max(b.x), y: a.y.max(b.y), xy: a.xy.max(b.xy) })
        })
}
