// Helpers shared by the integration suites. Not every suite uses every item.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hhqi::grid::{Degrees, Grid2, Rect, UniformGrid};
use hhqi::harness::functions::TestFunction;
use hhqi::mesh::{Cell, HierarchicalMesh};
use hhqi::tensor::{coefficient_box, TensorSpline};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn square() -> Rect<f64> {
    Rect::new(-1.0, 1.0, -1.0, 1.0)
}

pub fn base(n: usize) -> UniformGrid<f64> {
    UniformGrid::new(square(), n, n, 0).unwrap()
}

/// Splits a random share of the finest active cells, `depth - 1` times.
/// Always splits at least one cell per round so the mesh has `depth` levels.
pub fn random_mesh<R: Rng>(rng: &mut R, n: usize, depth: usize, share: f64) -> HierarchicalMesh<f64> {
    let mut mesh = HierarchicalMesh::from_domains(base(n), &[]).unwrap();
    for level in 0..depth.saturating_sub(1) {
        let cells = mesh.active_cells(level);
        let mut pick: BTreeSet<Cell> = cells.iter().copied().filter(|_| rng.gen_bool(share)).collect();
        if pick.is_empty() {
            pick.insert(*cells.choose(rng).unwrap());
        }
        mesh = mesh.split(&pick).unwrap();
    }
    mesh
}

pub fn random_degrees<R: Rng>(rng: &mut R) -> Degrees {
    Degrees::new(rng.gen_range(2..=4), rng.gen_range(2..=4)).unwrap()
}

pub fn random_point<R: Rng>(rng: &mut R) -> (f64, f64) {
    (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

/// `sum c[a][b] x^a y^b`.
pub struct Poly {
    pub c: Vec<Vec<f64>>,
}

impl Poly {
    pub fn random<R: Rng>(rng: &mut R, d: Degrees) -> Self {
        let c = (0..=d.d1).map(|_| (0..=d.d2).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        Self { c }
    }
}

fn falling(k: usize, n: usize) -> f64 {
    (0..n).map(|t| (k - t) as f64).product()
}

fn monomial_deriv(x: f64, k: usize, n: usize) -> f64 {
    if n > k {
        0.0
    } else {
        falling(k, n) * x.powi((k - n) as i32)
    }
}

impl TestFunction<f64> for Poly {
    fn name(&self) -> &str {
        "poly"
    }

    fn deriv(&self, x: f64, y: f64, a: usize, b: usize) -> f64 {
        let mut s = 0.0;
        for (p, row) in self.c.iter().enumerate() {
            for (q, &c) in row.iter().enumerate() {
                s += c * monomial_deriv(x, p, a) * monomial_deriv(y, q, b);
            }
        }
        s
    }
}

/// A spline on the grid enlarged by `d` cells per side, so that lattice data
/// outside the domain come from the same piecewise polynomial.
pub struct ExtendedSpline {
    pub inner: UniformGrid<f64>,
    pub outer: TensorSpline<f64>,
}

impl ExtendedSpline {
    pub fn random<R: Rng>(rng: &mut R, n: usize, d: Degrees) -> Self {
        let inner = base(n);
        let (ex, ey) = (d.d1 as f64 * inner.hx(), d.d2 as f64 * inner.hy());
        let outer_grid = UniformGrid::new(
            Rect::new(-1.0 - ex, 1.0 + ex, -1.0 - ey, 1.0 + ey),
            n + 2 * d.d1,
            n + 2 * d.d2,
            0,
        )
        .unwrap();
        let b = coefficient_box(&outer_grid, d);
        let coeffs = Grid2::from_fn(b, |_, _| rng.gen_range(-1.0..1.0));
        Self { inner, outer: TensorSpline::new(outer_grid, d, coeffs).unwrap() }
    }

    /// Coefficient of inner index `(j, i)`.
    pub fn coefficient(&self, j: i64, i: i64) -> f64 {
        let d = self.outer.degrees;
        self.outer.coeffs.at(j + d.d2 as i64, i + d.d1 as i64)
    }
}

impl TestFunction<f64> for ExtendedSpline {
    fn name(&self) -> &str {
        "spline"
    }

    fn deriv(&self, x: f64, y: f64, a: usize, b: usize) -> f64 {
        self.outer.eval(x, y, a, b).unwrap()
    }
}

/// `sin(2x + 1) cos(3y - 1/2)`; smooth on every scale of interest.
pub struct Wave;

impl TestFunction<f64> for Wave {
    fn name(&self) -> &str {
        "wave"
    }

    fn deriv(&self, x: f64, y: f64, a: usize, b: usize) -> f64 {
        let u = 2.0 * x + 1.0;
        let v = 3.0 * y - 0.5;
        let dx = 2f64.powi(a as i32) * (u + a as f64 * std::f64::consts::FRAC_PI_2).sin();
        let dy = 3f64.powi(b as i32) * (v + b as f64 * std::f64::consts::FRAC_PI_2).cos();
        dx * dy
    }
}

/// Max of `|a - b|` on an `n x n` grid over the square.
pub fn sup_diff(n: usize, a: impl Fn(f64, f64) -> f64, b: impl Fn(f64, f64) -> f64) -> f64 {
    let mut best = 0f64;
    for p in 0..n {
        let y = -1.0 + 2.0 * p as f64 / (n - 1) as f64;
        for q in 0..n {
            let x = -1.0 + 2.0 * q as f64 / (n - 1) as f64;
            best = best.max((a(x, y) - b(x, y)).abs());
        }
    }
    best
}
