//! Sources of sampled data: analytic Hermite data, plain values, finite-difference
//! synthesis and query-counting wrappers.

use std::collections::HashSet;
use std::sync::Mutex;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{QiError, QiResult};
use crate::grid::{Degrees, Rect, UniformGrid};
use crate::scalar::Scalar;
use crate::tensor::HermiteSample;

/// Finest level representable in a [`SamplePoint::key`].
pub const MAX_KEY_LEVEL: usize = 24;

/// A point of a level lattice, possibly subdivided: `x = a + mx * h_level / sub_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint<T> {
    pub level: usize,
    pub sub_x: u32,
    pub sub_y: u32,
    pub mx: i64,
    pub my: i64,
    pub x: T,
    pub y: T,
}

impl<T: Scalar> SamplePoint<T> {
    /// Point `(x_i, y_j)` of the level grid.
    pub fn lattice(grid: &UniformGrid<T>, i: i64, j: i64) -> Self {
        Self { level: grid.level, sub_x: 1, sub_y: 1, mx: i, my: j, x: grid.x(i), y: grid.y(j) }
    }

    /// Point `(x_0 + mx h_x/sub_x, y_0 + my h_y/sub_y)` of a subdivided level grid.
    pub fn subdivided(grid: &UniformGrid<T>, (sub_x, sub_y): (u32, u32), mx: i64, my: i64) -> Self {
        Self {
            level: grid.level,
            sub_x,
            sub_y,
            mx,
            my,
            x: grid.domain.x0 + T::from_int(mx) * grid.hx() / T::from_int(sub_x as i64),
            y: grid.domain.y0 + T::from_int(my) * grid.hy() / T::from_int(sub_y as i64),
        }
    }

    /// Integer coordinates shared by every representation of the same physical point.
    pub fn key(&self) -> (i64, i64) {
        debug_assert!(self.level <= MAX_KEY_LEVEL && 12 % self.sub_x == 0 && 12 % self.sub_y == 0);
        let shift = MAX_KEY_LEVEL - self.level;
        (
            self.mx * ((12 / self.sub_x as i64) << shift),
            self.my * ((12 / self.sub_y as i64) << shift),
        )
    }
}

/// Supplies `f`, `f_x`, `f_y`, `f_xy` at lattice points of any level.
pub trait HermiteProvider<T>: Sync {
    fn hermite(&self, p: &SamplePoint<T>) -> QiResult<HermiteSample<T>>;
}

/// Supplies values of `f` only.
pub trait ValueSource<T>: Sync {
    fn value(&self, p: &SamplePoint<T>) -> QiResult<T>;
}

/// Hermite data from closed-form derivatives.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticProvider<F>(pub F);

impl<T: Scalar, F: Fn(T, T) -> HermiteSample<T> + Sync> HermiteProvider<T> for AnalyticProvider<F> {
    fn hermite(&self, p: &SamplePoint<T>) -> QiResult<HermiteSample<T>> {
        Ok((self.0)(p.x, p.y))
    }
}

/// Values from a closure defined everywhere.
#[derive(Debug, Clone, Copy)]
pub struct FnSource<F>(pub F);

impl<T: Scalar, F: Fn(T, T) -> T + Sync> ValueSource<T> for FnSource<F> {
    fn value(&self, p: &SamplePoint<T>) -> QiResult<T> {
        Ok((self.0)(p.x, p.y))
    }
}

/// A value source that only covers a rectangle.
#[derive(Debug, Clone, Copy)]
pub struct BoundedSource<S, T> {
    pub inner: S,
    pub cover: Rect<T>,
}

impl<T: Scalar, S: ValueSource<T>> ValueSource<T> for BoundedSource<S, T> {
    fn value(&self, p: &SamplePoint<T>) -> QiResult<T> {
        let slack = T::lit(1e-12) * (self.cover.width() + self.cover.height());
        let c = &self.cover;
        if p.x < c.x0 - slack || p.x > c.x1 + slack || p.y < c.y0 - slack || p.y > c.y1 + slack {
            return Err(QiError::DataCoverage { level: p.level, x: p.x.as_f64(), y: p.y.as_f64() });
        }
        self.inner.value(p)
    }
}

/// Counts the distinct physical points queried through a wrapped source.
#[derive(Debug)]
pub struct Counting<S> {
    pub inner: S,
    seen: Mutex<HashSet<(i64, i64)>>,
}

impl<S> Counting<S> {
    pub fn new(inner: S) -> Self {
        Self { inner, seen: Mutex::new(HashSet::new()) }
    }

    pub fn distinct_points(&self) -> usize {
        self.seen.lock().unwrap().len()
    }

    pub fn reset(&self) {
        self.seen.lock().unwrap().clear();
    }

    fn record<T: Scalar>(&self, p: &SamplePoint<T>) {
        self.seen.lock().unwrap().insert(p.key());
    }
}

impl<T: Scalar, S: HermiteProvider<T>> HermiteProvider<T> for Counting<S> {
    fn hermite(&self, p: &SamplePoint<T>) -> QiResult<HermiteSample<T>> {
        self.record(p);
        self.inner.hermite(p)
    }
}

impl<T: Scalar, S: ValueSource<T>> ValueSource<T> for Counting<S> {
    fn value(&self, p: &SamplePoint<T>) -> QiResult<T> {
        self.record(p);
        self.inner.value(p)
    }
}

/// A first-derivative difference formula on `order + 1` consecutive points
/// starting `-start` steps from the target.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    pub order: usize,
    pub start: i64,
    pub weights: Vec<Ratio<i64>>,
}

impl Stencil {
    /// Exact weights of the order-`k` formula; for `k = 3` these are
    /// `(-2, -3, 6, -1) / 6` at offsets `-1..=2`.
    pub fn first_derivative(order: usize) -> QiResult<Self> {
        if order == 0 || order > 8 {
            return Err(QiError::InvalidOrder { order, degree: 8 });
        }
        let n = order + 1;
        let start = -((order / 2) as i64);
        // sum_k w_k o_k^p = [p == 1], p = 0..n-1
        let mut a: Vec<Vec<Ratio<i64>>> = (0..n)
            .map(|p| {
                let mut row: Vec<Ratio<i64>> =
                    (0..n).map(|k| Ratio::from_integer((start + k as i64).pow(p as u32))).collect();
                row.push(if p == 1 { Ratio::one() } else { Ratio::zero() });
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("Vandermonde is invertible");
            a.swap(col, piv);
            let p = a[col][col];
            for v in a[col].iter_mut() {
                *v /= p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col];
                    for c in 0..=n {
                        let t = a[col][c] * f;
                        a[r][c] -= t;
                    }
                }
            }
        }
        Ok(Self { order, start, weights: a.into_iter().map(|r| r[n]).collect() })
    }

    /// Steps needed beyond the target point on the (left, right).
    pub fn reach(&self) -> (usize, usize) {
        let left = (-self.start).max(0) as usize;
        (left, self.weights.len() - 1 - left)
    }

    pub fn weights_as<T: Scalar>(&self) -> Vec<T> {
        self.weights.iter().map(|w| T::from_int(*w.numer()) / T::from_int(*w.denom())).collect()
    }
}

/// Hermite data synthesized from values by difference formulas; `f_xy` applies
/// the x-formula, then the y-formula.
#[derive(Debug, Clone)]
pub struct FdHermiteProvider<S, T> {
    pub source: S,
    pub base: UniformGrid<T>,
    pub sx: Stencil,
    pub sy: Stencil,
    wx: Vec<T>,
    wy: Vec<T>,
}

impl<S, T: Scalar> FdHermiteProvider<S, T> {
    /// Lattice steps of `f` values needed beyond the Hermite data lattice,
    /// per side: `(left, right, bottom, top)`.
    pub fn required_enlargement(&self) -> (usize, usize, usize, usize) {
        let (l, r) = self.sx.reach();
        let (b, t) = self.sy.reach();
        (l, r, b, t)
    }
}

pub fn fd_hermite_provider<S, T: Scalar>(
    source: S,
    base: UniformGrid<T>,
    degrees: Degrees,
    orders: (usize, usize),
) -> QiResult<FdHermiteProvider<S, T>> {
    if orders.0 < degrees.d1 {
        return Err(QiError::InvalidOrder { order: orders.0, degree: degrees.d1 });
    }
    if orders.1 < degrees.d2 {
        return Err(QiError::InvalidOrder { order: orders.1, degree: degrees.d2 });
    }
    let sx = Stencil::first_derivative(orders.0)?;
    let sy = Stencil::first_derivative(orders.1)?;
    let (wx, wy) = (sx.weights_as(), sy.weights_as());
    Ok(FdHermiteProvider { source, base: base.at_level(0), sx, sy, wx, wy })
}

impl<T: Scalar, S: ValueSource<T>> HermiteProvider<T> for FdHermiteProvider<S, T> {
    fn hermite(&self, p: &SamplePoint<T>) -> QiResult<HermiteSample<T>> {
        let g = self.base.at_level(p.level);
        let (i, j) = (p.mx, p.my);
        let at = |di: i64, dj: i64| self.source.value(&SamplePoint::lattice(&g, i + di, j + dj));
        let f = at(0, 0)?;
        let mut fx = T::zero();
        let mut fy = T::zero();
        let mut fxy = T::zero();
        for (q, &wq) in self.wy.iter().enumerate() {
            let dj = self.sy.start + q as i64;
            let mut row = T::zero();
            for (r, &wr) in self.wx.iter().enumerate() {
                let di = self.sx.start + r as i64;
                let v = at(di, dj)?;
                row = row + wr * v;
                if dj == 0 {
                    fx = fx + wr * v;
                }
            }
            fxy = fxy + wq * row;
        }
        for (q, &wq) in self.wy.iter().enumerate() {
            fy = fy + wq * at(0, self.sy.start + q as i64)?;
        }
        let (hx, hy) = (g.hx(), g.hy());
        Ok(HermiteSample { f, fx: fx / hx, fy: fy / hy, fxy: fxy / (hx * hy) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_three_weights() {
        let s = Stencil::first_derivative(3).unwrap();
        assert_eq!(s.start, -1);
        let want: Vec<Ratio<i64>> = [-2, -3, 6, -1].iter().map(|&v| Ratio::new(v, 6)).collect();
        assert_eq!(s.weights, want);
        assert_eq!(s.reach(), (1, 2));
    }

    #[test]
    fn stencils_differentiate_monomials_exactly() {
        for k in 1..=6 {
            let s = Stencil::first_derivative(k).unwrap();
            for p in 0..=k as u32 {
                let d: Ratio<i64> = s
                    .weights
                    .iter()
                    .enumerate()
                    .map(|(n, w)| w * Ratio::from_integer((s.start + n as i64).pow(p)))
                    .sum();
                assert_eq!(d, Ratio::from_integer(if p == 1 { 1 } else { 0 }), "k={k} p={p}");
            }
        }
    }

    #[test]
    fn keys_identify_physical_points() {
        let g = UniformGrid::new(Rect::new(-1.0, 1.0, -1.0, 1.0), 8, 8, 0).unwrap();
        let a = SamplePoint::lattice(&g, 3, -2);
        let b = SamplePoint::lattice(&g.at_level(2), 12, -8);
        let c = SamplePoint::subdivided(&g.at_level(1), (3, 3), 18, -12);
        assert_eq!(a.key(), b.key());
        assert_eq!(a.key(), c.key());
        assert_eq!((a.x, a.y), (b.x, b.y));
    }

    #[test]
    fn coverage_is_enforced() {
        let g = UniformGrid::new(Rect::new(0.0, 1.0, 0.0, 1.0), 4, 4, 0).unwrap();
        let src = BoundedSource { inner: FnSource(|x: f64, _y: f64| x), cover: Rect::new(0.0, 1.0, 0.0, 1.0) };
        assert!(src.value(&SamplePoint::lattice(&g, 4, 0)).is_ok());
        assert!(matches!(
            src.value(&SamplePoint::lattice(&g, 5, 0)),
            Err(QiError::DataCoverage { level: 0, .. })
        ));
    }
}
