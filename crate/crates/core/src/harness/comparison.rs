//! The collocation-based comparison quasi-interpolant `Q-hat` and its
//! hierarchical extension.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::bspline::cell_basis;
use crate::error::{QiError, QiResult};
use crate::grid::{Degrees, Grid2, UniformGrid};
use crate::hqi::HierSpline;
use crate::mesh::HierarchicalMesh;
use crate::provider::{SamplePoint, ValueSource};
use crate::scalar::Scalar;
use crate::tensor::{coefficient_box, TensorSpline};

/// Solves `A x = b` by LU with partial pivoting; `None` for a singular matrix.
pub fn lu_solve<T: Scalar>(a: Vec<Vec<T>>, b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    let m = DMatrix::from_fn(n, n, |r, c| a[r][c].as_f64());
    let rhs = DVector::from_iterator(n, b.iter().map(|v| v.as_f64()));
    let lu = m.lu();
    let scale = lu.u().amax();
    if (0..n).any(|k| lu.u()[(k, k)].abs() <= scale * f64::EPSILON * n as f64) {
        return None;
    }
    lu.solve(&rhs).map(|x| x.iter().map(|&v| T::lit(v)).collect())
}

/// Weights turning the `(d1+1)(d2+1)` collocation values of `Theta_J` into
/// the coefficient `sigma_J`.
///
/// On a uniform grid the local matrix does not depend on `J`: the points
/// `x_{i+d1/2} + r1 h_x / d1` all lie on the cell `c = i + floor(d1/2)` and the
/// unknowns are the B-splines `c - d1 ..= c` non-zero there.
#[derive(Debug, Clone)]
pub struct ComparisonFunctional<T> {
    pub degrees: Degrees,
    weights: Option<Vec<T>>,
}

impl<T: Scalar> ComparisonFunctional<T> {
    pub fn new(degrees: Degrees) -> Self {
        let (d1, d2) = (degrees.d1, degrees.d2);
        let (n1, n2) = (d1 + 1, d2 + 1);
        let bx: Vec<_> = (0..n1).map(|r| cell_basis(d1, T::from_int(r as i64) / T::from_int(d1 as i64), 0)).collect();
        let by: Vec<_> = (0..n2).map(|r| cell_basis(d2, T::from_int(r as i64) / T::from_int(d2 as i64), 0)).collect();
        // a[p][k], p = r2 * n1 + r1 (point), k = m2 * n1 + m1 (B-spline c - d + m)
        let mut at = vec![vec![T::zero(); n1 * n2]; n1 * n2];
        for r2 in 0..n2 {
            for r1 in 0..n1 {
                for m2 in 0..n2 {
                    for m1 in 0..n1 {
                        // stored transposed: we need row sigma of the inverse
                        at[m2 * n1 + m1][r2 * n1 + r1] = bx[r1][m1] * by[r2][m2];
                    }
                }
            }
        }
        let sigma = (d2 - d2 / 2) * n1 + (d1 - d1 / 2);
        let mut e = vec![T::zero(); n1 * n2];
        e[sigma] = T::one();
        Self { degrees, weights: lu_solve(at, e) }
    }

    /// `lambda-hat_J(f)` on one level grid.
    pub fn apply<S: ValueSource<T> + ?Sized>(&self, grid: &UniformGrid<T>, source: &S, j: i64, i: i64) -> QiResult<T> {
        let w = self.weights.as_ref().ok_or(QiError::SingularSystem { j, i })?;
        let (d1, d2) = (self.degrees.d1 as i64, self.degrees.d2 as i64);
        let (c1, c2) = (i + d1 / 2, j + d2 / 2);
        let n1 = (d1 + 1) as usize;
        let mut acc = T::zero();
        for r2 in 0..=d2 {
            for r1 in 0..=d1 {
                let p = SamplePoint::subdivided(grid, (d1 as u32, d2 as u32), d1 * c1 + r1, d2 * c2 + r2);
                acc = acc + w[r2 as usize * n1 + r1 as usize] * source.value(&p)?;
            }
        }
        Ok(acc)
    }
}

/// Tensor `Q-hat` on one uniform grid.
pub fn comparison_qi<T: Scalar, S: ValueSource<T> + ?Sized>(
    grid: &UniformGrid<T>,
    degrees: Degrees,
    source: &S,
) -> QiResult<TensorSpline<T>> {
    let functional = ComparisonFunctional::new(degrees);
    let b = coefficient_box(grid, degrees);
    let ids: Vec<(i64, i64)> = b.iter().collect();
    let values = ids
        .par_iter()
        .map(|&(j, i)| functional.apply(grid, source, j, i))
        .collect::<QiResult<Vec<T>>>()?;
    let mut it = values.into_iter();
    TensorSpline::new(*grid, degrees, Grid2::from_fn(b, |_, _| it.next().unwrap()))
}

/// Hierarchical `Q-hat_H`: level-`l` collocation functionals on active indices.
pub fn comparison_hqi<T: Scalar, S: ValueSource<T> + ?Sized>(
    mesh: &HierarchicalMesh<T>,
    degrees: Degrees,
    source: &S,
) -> QiResult<HierSpline<T>> {
    let functional = ComparisonFunctional::new(degrees);
    HierSpline::from_coefficients(mesh, degrees, |l, j, i| functional.apply(&mesh.grid(l), source, j, i))
}
