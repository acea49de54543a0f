//! Uniform grid geometry and offset-indexed dense storage.

use crate::error::{QiError, QiResult};
use crate::scalar::Scalar;

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T> {
    pub x0: T,
    pub x1: T,
    pub y0: T,
    pub y1: T,
}

impl<T: Scalar> Rect<T> {
    pub fn new(x0: T, x1: T, y0: T, y1: T) -> Self {
        Self { x0, x1, y0, y1 }
    }

    pub fn width(&self) -> T {
        self.x1 - self.x0
    }

    pub fn height(&self) -> T {
        self.y1 - self.y0
    }

    pub fn area(&self) -> T {
        self.width() * self.height()
    }

    pub fn diameter(&self) -> T {
        self.width().hypot(self.height())
    }

    pub fn contains(&self, x: T, y: T) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    pub fn contains_rect(&self, other: &Rect<T>) -> bool {
        other.x0 >= self.x0 && other.x1 <= self.x1 && other.y0 >= self.y0 && other.y1 <= self.y1
    }

    /// Smallest rectangle containing both.
    pub fn union(&self, other: &Rect<T>) -> Rect<T> {
        Rect {
            x0: self.x0.min(other.x0),
            x1: self.x1.max(other.x1),
            y0: self.y0.min(other.y0),
            y1: self.y1.max(other.y1),
        }
    }
}

/// Bi-degree `(d1, d2)` of a tensor spline space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Degrees {
    pub d1: usize,
    pub d2: usize,
}

impl Degrees {
    /// Degrees supported by the quasi-interpolants: each in `{2, 3, 4}`.
    pub fn new(d1: usize, d2: usize) -> QiResult<Self> {
        for d in [d1, d2] {
            if !(2..=4).contains(&d) {
                return Err(QiError::UnsupportedDegree(d));
            }
        }
        Ok(Self { d1, d2 })
    }

    pub fn square(d: usize) -> QiResult<Self> {
        Self::new(d, d)
    }

    /// Number of tensor B-splines non-zero on one cell.
    pub fn local_count(&self) -> usize {
        (self.d1 + 1) * (self.d2 + 1)
    }
}

impl std::fmt::Display for Degrees {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.d1, self.d2)
    }
}

/// Uniform tensor grid of a given dyadic level over a rectangular domain.
///
/// Level `l` has `N1 * 2^l` by `N2 * 2^l` cells of size `h_x / 2^l` by
/// `h_y / 2^l`. Lattice abscissae `x_i = a1 + i * h_{x,l}` are defined for any
/// integer `i`, including the extended lattice outside the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid<T> {
    pub domain: Rect<T>,
    pub base_n1: usize,
    pub base_n2: usize,
    pub level: usize,
}

impl<T: Scalar> UniformGrid<T> {
    pub fn new(domain: Rect<T>, base_n1: usize, base_n2: usize, level: usize) -> QiResult<Self> {
        if base_n1 == 0 || base_n2 == 0 {
            return Err(QiError::InvalidMesh("cell counts must be positive".into()));
        }
        if !(domain.x1 > domain.x0 && domain.y1 > domain.y0) {
            return Err(QiError::InvalidMesh("domain must have positive extent".into()));
        }
        Ok(Self { domain, base_n1, base_n2, level })
    }

    pub fn at_level(&self, level: usize) -> Self {
        Self { level, ..*self }
    }

    pub fn n1(&self) -> usize {
        self.base_n1 << self.level
    }

    pub fn n2(&self) -> usize {
        self.base_n2 << self.level
    }

    pub fn base_hx(&self) -> T {
        self.domain.width() / T::from_usize(self.base_n1).unwrap()
    }

    pub fn base_hy(&self) -> T {
        self.domain.height() / T::from_usize(self.base_n2).unwrap()
    }

    pub fn hx(&self) -> T {
        self.base_hx() / T::from_usize(1usize << self.level).unwrap()
    }

    pub fn hy(&self) -> T {
        self.base_hy() / T::from_usize(1usize << self.level).unwrap()
    }

    #[inline]
    pub fn x(&self, i: i64) -> T {
        self.domain.x0 + T::from_int(i) * self.hx()
    }

    #[inline]
    pub fn y(&self, j: i64) -> T {
        self.domain.y0 + T::from_int(j) * self.hy()
    }

    /// Cell `(i, j)` as a rectangle.
    pub fn cell_rect(&self, i: i64, j: i64) -> Rect<T> {
        Rect::new(self.x(i), self.x(i + 1), self.y(j), self.y(j + 1))
    }

    /// Cell index along x containing `x` (half-open cells, last cell closed)
    /// and the local coordinate in `[0, 1]`.
    #[inline]
    pub fn locate_x(&self, x: T) -> (i64, T) {
        locate(x, self.domain.x0, self.hx(), self.n1())
    }

    #[inline]
    pub fn locate_y(&self, y: T) -> (i64, T) {
        locate(y, self.domain.y0, self.hy(), self.n2())
    }

    pub fn contains(&self, x: T, y: T) -> bool {
        self.domain.contains(x, y)
    }
}

#[inline]
fn locate<T: Scalar>(v: T, origin: T, h: T, n: usize) -> (i64, T) {
    let u = (v - origin) / h;
    let mut c = u.floor().to_i64().unwrap_or(0);
    c = c.clamp(0, n as i64 - 1);
    (c, u - T::from_int(c))
}

/// Inclusive integer index box `[i0, i1] x [j0, j1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexBox {
    pub i0: i64,
    pub i1: i64,
    pub j0: i64,
    pub j1: i64,
}

impl IndexBox {
    pub fn new(i0: i64, i1: i64, j0: i64, j1: i64) -> Self {
        Self { i0, i1, j0, j1 }
    }

    pub fn is_empty(&self) -> bool {
        self.i1 < self.i0 || self.j1 < self.j0
    }

    pub fn nx(&self) -> usize {
        (self.i1 - self.i0 + 1).max(0) as usize
    }

    pub fn ny(&self) -> usize {
        (self.j1 - self.j0 + 1).max(0) as usize
    }

    pub fn len(&self) -> usize {
        self.nx() * self.ny()
    }

    pub fn contains(&self, i: i64, j: i64) -> bool {
        i >= self.i0 && i <= self.i1 && j >= self.j0 && j <= self.j1
    }

    pub fn intersect(&self, other: &IndexBox) -> IndexBox {
        IndexBox {
            i0: self.i0.max(other.i0),
            i1: self.i1.min(other.i1),
            j0: self.j0.max(other.j0),
            j1: self.j1.min(other.j1),
        }
    }

    /// Iterates `(j, i)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let b = *self;
        (b.j0..=b.j1).flat_map(move |j| (b.i0..=b.i1).map(move |i| (j, i)))
    }
}

/// Dense row-major `(j, i)` array over an [`IndexBox`].
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2<T> {
    bounds: IndexBox,
    data: Vec<T>,
}

impl<T: Copy> Grid2<T> {
    pub fn filled(bounds: IndexBox, value: T) -> Self {
        Self { bounds, data: vec![value; bounds.len()] }
    }

    pub fn from_fn(bounds: IndexBox, mut f: impl FnMut(i64, i64) -> T) -> Self {
        let data = bounds.iter().map(|(j, i)| f(j, i)).collect();
        Self { bounds, data }
    }

    pub fn bounds(&self) -> IndexBox {
        self.bounds
    }

    #[inline]
    fn offset(&self, j: i64, i: i64) -> usize {
        (j - self.bounds.j0) as usize * self.bounds.nx() + (i - self.bounds.i0) as usize
    }

    #[inline]
    pub fn get(&self, j: i64, i: i64) -> Option<T> {
        if self.bounds.contains(i, j) {
            Some(self.data[self.offset(j, i)])
        } else {
            None
        }
    }

    /// Unchecked-by-contract access; panics outside the bounds.
    #[inline]
    pub fn at(&self, j: i64, i: i64) -> T {
        debug_assert!(self.bounds.contains(i, j), "({j}, {i}) outside {:?}", self.bounds);
        self.data[self.offset(j, i)]
    }

    #[inline]
    pub fn set(&mut self, j: i64, i: i64, v: T) {
        let o = self.offset(j, i);
        self.data[o] = v;
    }

    #[inline]
    pub fn at_mut(&mut self, j: i64, i: i64) -> &mut T {
        let o = self.offset(j, i);
        &mut self.data[o]
    }

    pub fn values(&self) -> &[T] {
        &self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), T)> + '_ {
        self.bounds.iter().zip(self.data.iter().copied())
    }
}
