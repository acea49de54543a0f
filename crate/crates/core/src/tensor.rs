//! Tensor-product Hermite BS quasi-interpolant `Q = Q2 Q1` on one uniform level.
//!
//! Coefficient layout: `J = (j, i)` with `i in -d1 ..= N1-1`, `j in -d2 ..= N2-1`,
//! stored row-major over `(j, i)`. The basis function of `J` is
//! `B_{d1}((x - a1)/h_x - i) B_{d2}((y - a2)/h_y - j)`. Hermite data live on the
//! inner extended lattice `i in -d1+1 ..= N1+d1-1` (same for `j`).

use rayon::prelude::*;

use crate::bspline::cell_basis;
use crate::error::{QiError, QiResult};
use crate::grid::{Degrees, Grid2, IndexBox, Rect, UniformGrid};
use crate::scalar::Scalar;
use crate::uniform_qi::QiCoefficients;

/// `f`, `f_x`, `f_y`, `f_xy` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HermiteSample<T> {
    pub f: T,
    pub fx: T,
    pub fy: T,
    pub fxy: T,
}

/// Coefficient index set of a level: `[-d1, N1-1] x [-d2, N2-1]`.
pub fn coefficient_box<T: Scalar>(grid: &UniformGrid<T>, degrees: Degrees) -> IndexBox {
    IndexBox::new(
        -(degrees.d1 as i64),
        grid.n1() as i64 - 1,
        -(degrees.d2 as i64),
        grid.n2() as i64 - 1,
    )
}

/// Inner points of the extended lattice: `[-d1+1, N1+d1-1] x [-d2+1, N2+d2-1]`.
pub fn lattice_box<T: Scalar>(grid: &UniformGrid<T>, degrees: Degrees) -> IndexBox {
    let (d1, d2) = (degrees.d1 as i64, degrees.d2 as i64);
    IndexBox::new(-d1 + 1, grid.n1() as i64 + d1 - 1, -d2 + 1, grid.n2() as i64 + d2 - 1)
}

/// Hermite data of one level on the inner extended lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteData<T> {
    pub grid: UniformGrid<T>,
    pub degrees: Degrees,
    pub f: Grid2<T>,
    pub fx: Grid2<T>,
    pub fy: Grid2<T>,
    pub fxy: Grid2<T>,
}

impl<T: Scalar> HermiteData<T> {
    pub fn new(
        grid: UniformGrid<T>,
        degrees: Degrees,
        f: Grid2<T>,
        fx: Grid2<T>,
        fy: Grid2<T>,
        fxy: Grid2<T>,
    ) -> QiResult<Self> {
        let want = lattice_box(&grid, degrees);
        for (name, g) in [("f", &f), ("fx", &fx), ("fy", &fy), ("fxy", &fxy)] {
            if g.bounds() != want {
                return Err(QiError::MalformedSamples(format!(
                    "grid `{name}` has bounds {:?}, expected {want:?}",
                    g.bounds()
                )));
            }
        }
        Ok(Self { grid, degrees, f, fx, fy, fxy })
    }

    /// Samples a closure at every inner extended-lattice point.
    pub fn from_fn(
        grid: UniformGrid<T>,
        degrees: Degrees,
        sample: impl Fn(T, T) -> HermiteSample<T>,
    ) -> Self {
        let b = lattice_box(&grid, degrees);
        let s = Grid2::from_fn(b, |j, i| sample(grid.x(i), grid.y(j)));
        Self {
            grid,
            degrees,
            f: Grid2::from_fn(b, |j, i| s.at(j, i).f),
            fx: Grid2::from_fn(b, |j, i| s.at(j, i).fx),
            fy: Grid2::from_fn(b, |j, i| s.at(j, i).fy),
            fxy: Grid2::from_fn(b, |j, i| s.at(j, i).fxy),
        }
    }

    pub fn sample(&self, j: i64, i: i64) -> Option<HermiteSample<T>> {
        Some(HermiteSample {
            f: self.f.get(j, i)?,
            fx: self.fx.get(j, i)?,
            fy: self.fy.get(j, i)?,
            fxy: self.fxy.get(j, i)?,
        })
    }
}

/// The local tensor functional `lambda_J` for one bi-degree.
#[derive(Debug, Clone)]
pub struct TensorFunctional<T> {
    pub degrees: Degrees,
    pub cx: QiCoefficients<T>,
    pub cy: QiCoefficients<T>,
}

impl<T: Scalar> TensorFunctional<T> {
    pub fn new(degrees: Degrees) -> QiResult<Self> {
        Ok(Self {
            degrees,
            cx: QiCoefficients::new(degrees.d1)?,
            cy: QiCoefficients::new(degrees.d2)?,
        })
    }

    /// `a2' F a1 - h_x a2' F_x b1 - h_y b2' F_y a1 + h_x h_y b2' F_xy b1`.
    ///
    /// `window(q, r)` returns the sample at lattice point `(i + 1 + r, j + 1 + q)`,
    /// `q < d2`, `r < d1`.
    pub fn apply<E>(
        &self,
        hx: T,
        hy: T,
        mut window: impl FnMut(usize, usize) -> Result<HermiteSample<T>, E>,
    ) -> Result<T, E> {
        let (d1, d2) = (self.degrees.d1, self.degrees.d2);
        let (mut aa, mut ab, mut ba, mut bb) = (T::zero(), T::zero(), T::zero(), T::zero());
        for q in 0..d2 {
            let (ay, by) = (self.cy.alpha[q], self.cy.beta[q]);
            for r in 0..d1 {
                let (ax, bx) = (self.cx.alpha[r], self.cx.beta[r]);
                let s = window(q, r)?;
                aa = aa + ay * s.f * ax;
                ab = ab + ay * s.fx * bx;
                ba = ba + by * s.fy * ax;
                bb = bb + by * s.fxy * bx;
            }
        }
        Ok(aa - hx * ab - hy * ba + hx * hy * bb)
    }
}

/// `lambda_J(f)` for `J = (j, i)` from one level's Hermite data.
pub fn lambda_j<T: Scalar>(data: &HermiteData<T>, j: i64, i: i64) -> QiResult<T> {
    let functional = TensorFunctional::new(data.degrees)?;
    lambda_j_with(&functional, data, j, i)
}

fn lambda_j_with<T: Scalar>(
    functional: &TensorFunctional<T>,
    data: &HermiteData<T>,
    j: i64,
    i: i64,
) -> QiResult<T> {
    functional.apply(data.grid.hx(), data.grid.hy(), |q, r| {
        data.sample(j + 1 + q as i64, i + 1 + r as i64).ok_or_else(|| QiError::IndexOutOfRange {
            j,
            i,
            context: "functional window leaves the Hermite data lattice".into(),
        })
    })
}

/// A spline of one uniform level in the tensor B-spline basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorSpline<T> {
    pub grid: UniformGrid<T>,
    pub degrees: Degrees,
    pub coeffs: Grid2<T>,
}

impl<T: Scalar> TensorSpline<T> {
    pub fn new(grid: UniformGrid<T>, degrees: Degrees, coeffs: Grid2<T>) -> QiResult<Self> {
        let want = coefficient_box(&grid, degrees);
        if coeffs.bounds() != want {
            return Err(QiError::MalformedSamples(format!(
                "coefficient bounds {:?}, expected {want:?}",
                coeffs.bounds()
            )));
        }
        Ok(Self { grid, degrees, coeffs })
    }

    pub fn zeros(grid: UniformGrid<T>, degrees: Degrees) -> Self {
        let b = coefficient_box(&grid, degrees);
        Self { grid, degrees, coeffs: Grid2::filled(b, T::zero()) }
    }

    /// `dim(V)` of the level: `(N1 + d1)(N2 + d2)`.
    pub fn dim(&self) -> usize {
        self.coeffs.bounds().len()
    }

    /// Evaluates `d^{r+s}/dx^r dy^s` at `(x, y)` using the `(d1+1)(d2+1)` local terms.
    pub fn eval(&self, x: T, y: T, r: usize, s: usize) -> QiResult<T> {
        check_orders(self.degrees, r, s)?;
        check_domain(&self.grid.domain, x, y)?;
        let (cx, tx) = self.grid.locate_x(x);
        let (cy, ty) = self.grid.locate_y(y);
        Ok(self.eval_in_cell(cx, cy, tx, ty, r, s))
    }

    /// Evaluation with the cell fixed by the caller; `tx`, `ty` are local
    /// coordinates in that cell.
    pub fn eval_in_cell(&self, cx: i64, cy: i64, tx: T, ty: T, r: usize, s: usize) -> T {
        let (d1, d2) = (self.degrees.d1, self.degrees.d2);
        let bx = cell_basis(d1, tx, r);
        let by = cell_basis(d2, ty, s);
        let mut acc = T::zero();
        for (q, &vy) in by.iter().enumerate().take(d2 + 1) {
            let j = cy - d2 as i64 + q as i64;
            let mut row = T::zero();
            for (m, &vx) in bx.iter().enumerate().take(d1 + 1) {
                row = row + self.coeffs.at(j, cx - d1 as i64 + m as i64) * vx;
            }
            acc = acc + row * vy;
        }
        acc / (self.grid.hx().powi(r as i32) * self.grid.hy().powi(s as i32))
    }
}

pub(crate) fn check_orders(degrees: Degrees, r: usize, s: usize) -> QiResult<()> {
    if r > degrees.d1 {
        return Err(QiError::InvalidOrder { order: r, degree: degrees.d1 });
    }
    if s > degrees.d2 {
        return Err(QiError::InvalidOrder { order: s, degree: degrees.d2 });
    }
    Ok(())
}

pub(crate) fn check_domain<T: Scalar>(domain: &Rect<T>, x: T, y: T) -> QiResult<()> {
    let slack = T::lit(1e-12) * (domain.width() + domain.height());
    if x < domain.x0 - slack || x > domain.x1 + slack || y < domain.y0 - slack || y > domain.y1 + slack {
        return Err(QiError::OutOfDomain { x: x.as_f64(), y: y.as_f64() });
    }
    Ok(())
}

/// Coefficients `M[j, i] = lambda_{(j,i)}(f)` of the tensor quasi-interpolant.
pub fn tensor_qi<T: Scalar>(data: &HermiteData<T>) -> QiResult<TensorSpline<T>> {
    let functional = TensorFunctional::new(data.degrees)?;
    let b = coefficient_box(&data.grid, data.degrees);
    let cells: Vec<(i64, i64)> = b.iter().collect();
    let values = cells
        .par_iter()
        .map(|&(j, i)| lambda_j_with(&functional, data, j, i))
        .collect::<QiResult<Vec<T>>>()?;
    let mut it = values.into_iter();
    let coeffs = Grid2::from_fn(b, |_, _| it.next().unwrap());
    TensorSpline::new(data.grid, data.degrees, coeffs)
}

/// Evaluates a tensor quasi-interpolant (or any tensor spline) with derivatives.
pub fn tensor_qi_eval<T: Scalar>(spline: &TensorSpline<T>, x: T, y: T, r: usize, s: usize) -> QiResult<T> {
    spline.eval(x, y, r, s)
}

/// Support of `lambda_J`: `[x_{i+1}, x_{i+d1}] x [y_{j+1}, y_{j+d2}]`.
pub fn functional_support<T: Scalar>(j: i64, i: i64, degrees: Degrees, grid: &UniformGrid<T>) -> Rect<T> {
    Rect::new(
        grid.x(i + 1),
        grid.x(i + degrees.d1 as i64),
        grid.y(j + 1),
        grid.y(j + degrees.d2 as i64),
    )
}

/// Products of coefficient 1-norms bounding each addend of `lambda_J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants<T> {
    pub k00: T,
    pub k10: T,
    pub k01: T,
    pub k11: T,
}

pub fn bound_constants<T: Scalar>(degrees: Degrees) -> QiResult<BoundConstants<T>> {
    let cx = QiCoefficients::<T>::new(degrees.d1)?;
    let cy = QiCoefficients::<T>::new(degrees.d2)?;
    Ok(BoundConstants {
        k00: cy.alpha_l1() * cx.alpha_l1(),
        k10: cy.alpha_l1() * cx.beta_l1(),
        k01: cy.beta_l1() * cx.alpha_l1(),
        k11: cy.beta_l1() * cx.beta_l1(),
    })
}

/// Sup-norms of `f`, `f_x`, `f_y`, `f_xy` over some region.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HermiteNorms<T> {
    pub f: T,
    pub fx: T,
    pub fy: T,
    pub fxy: T,
}

/// Right-hand side of the single-functional bound.
pub fn coefficient_bound<T: Scalar>(k: &BoundConstants<T>, hx: T, hy: T, norms: &HermiteNorms<T>) -> T {
    k.k00 * norms.f + hx * k.k10 * norms.fx + hy * k.k01 * norms.fy + hx * hy * k.k11 * norms.fxy
}
