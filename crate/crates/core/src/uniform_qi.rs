//! Univariate Hermite BS quasi-interpolant on a uniform partition.
//!
//! With `N` cells of width `h` on `[a, b]` and data `f(x_i)`, `f'(x_i)` on the
//! inner points `i = -d+1 .. N+d-1` of the extended partition, the operator is
//! `Q(f)(x) = sum_{j=-d}^{N-1} lambda_j(f) B_d((x - a)/h - j)` with
//!
//! `lambda_j(f) = sum_r alpha_r f(x_{j+r}) - h sum_r beta_r f'(x_{j+r})`, `r = 1..=d`.

use num_rational::Ratio;

use crate::bspline::cell_basis;
use crate::error::{QiError, QiResult};
use crate::scalar::Scalar;

/// Exact rational coefficient vectors for one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactQiCoefficients {
    pub degree: usize,
    pub alpha: Vec<Ratio<i64>>,
    pub beta: Vec<Ratio<i64>>,
}

/// Exact `alpha`/`beta` vectors for `d` in `{2, 3, 4}`.
pub fn qi_coefficients_exact(d: usize) -> QiResult<ExactQiCoefficients> {
    let r = |n: i64, m: i64| Ratio::new(n, m);
    let (alpha, beta) = match d {
        2 => (vec![r(1, 2), r(1, 2)], vec![r(-1, 4), r(1, 4)]),
        3 => (vec![r(-1, 2), r(2, 1), r(-1, 2)], vec![r(1, 6), r(0, 1), r(-1, 6)]),
        4 => (
            vec![r(5, 12), r(1, 12), r(1, 12), r(5, 12)],
            vec![r(-5, 48), r(-41, 48), r(41, 48), r(5, 48)],
        ),
        _ => return Err(QiError::UnsupportedDegree(d)),
    };
    Ok(ExactQiCoefficients { degree: d, alpha, beta })
}

/// Floating point copy of the coefficient vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct QiCoefficients<T> {
    pub degree: usize,
    pub alpha: Vec<T>,
    pub beta: Vec<T>,
}

impl<T: Scalar> QiCoefficients<T> {
    pub fn new(d: usize) -> QiResult<Self> {
        let exact = qi_coefficients_exact(d)?;
        let conv = |v: &[Ratio<i64>]| {
            v.iter()
                .map(|q| T::from_int(*q.numer()) / T::from_int(*q.denom()))
                .collect::<Vec<_>>()
        };
        Ok(Self { degree: d, alpha: conv(&exact.alpha), beta: conv(&exact.beta) })
    }

    pub fn alpha_l1(&self) -> T {
        self.alpha.iter().map(|v| v.abs()).sum()
    }

    pub fn beta_l1(&self) -> T {
        self.beta.iter().map(|v| v.abs()).sum()
    }
}

/// Shorthand for [`QiCoefficients::new`].
pub fn qi_coefficients<T: Scalar>(d: usize) -> QiResult<QiCoefficients<T>> {
    QiCoefficients::new(d)
}

/// Values and first derivatives on the inner points of the extended partition.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariateHermiteSamples<T> {
    pub degree: usize,
    pub a: T,
    pub h: T,
    pub cells: usize,
    /// `f(x_i)`, `i = -d+1 ..= N+d-1`.
    pub values: Vec<T>,
    /// `f'(x_i)` on the same points.
    pub derivs: Vec<T>,
}

impl<T: Scalar> UnivariateHermiteSamples<T> {
    pub fn new(degree: usize, a: T, h: T, cells: usize, values: Vec<T>, derivs: Vec<T>) -> QiResult<Self> {
        let s = Self { degree, a, h, cells, values, derivs };
        s.validate()?;
        Ok(s)
    }

    /// Samples `f` and `df` on `[a, b]` split into `cells` intervals.
    pub fn from_fn(
        degree: usize,
        a: T,
        b: T,
        cells: usize,
        f: impl Fn(T) -> T,
        df: impl Fn(T) -> T,
    ) -> QiResult<Self> {
        let h = (b - a) / T::from_usize(cells).unwrap();
        let d = degree as i64;
        let pts: Vec<T> = (-d + 1..=cells as i64 + d - 1)
            .map(|i| a + T::from_int(i) * h)
            .collect();
        Self::new(
            degree,
            a,
            h,
            cells,
            pts.iter().map(|&x| f(x)).collect(),
            pts.iter().map(|&x| df(x)).collect(),
        )
    }

    pub fn expected_len(&self) -> usize {
        self.cells + 2 * self.degree - 1
    }

    fn validate(&self) -> QiResult<()> {
        let n = self.expected_len();
        if self.values.len() != n || self.derivs.len() != n {
            return Err(QiError::MalformedSamples(format!(
                "expected {n} values and derivatives, got {} and {}",
                self.values.len(),
                self.derivs.len()
            )));
        }
        if !(self.h > T::zero()) {
            return Err(QiError::MalformedSamples("step must be positive".into()));
        }
        Ok(())
    }

    pub fn x(&self, i: i64) -> T {
        self.a + T::from_int(i) * self.h
    }
}

/// The `N + d` functionals `lambda_{-d} .. lambda_{N-1}` as a sliding window.
pub fn univariate_functionals<T: Scalar>(samples: &UnivariateHermiteSamples<T>) -> QiResult<Vec<T>> {
    samples.validate()?;
    let coeffs = QiCoefficients::<T>::new(samples.degree)?;
    let d = samples.degree;
    let out = (0..samples.cells + d)
        .map(|pos| {
            // lambda_j with j = pos - d reads sample slots pos .. pos + d - 1
            let mut acc = T::zero();
            for r in 0..d {
                acc = acc + coeffs.alpha[r] * samples.values[pos + r]
                    - samples.h * coeffs.beta[r] * samples.derivs[pos + r];
            }
            acc
        })
        .collect();
    Ok(out)
}

/// Evaluates `sum_j lambda_j B_d^{(order)}((x - a)/h - j)` on `[a, b]`.
pub fn univariate_qi_eval<T: Scalar>(
    lambda: &[T],
    d: usize,
    h: T,
    domain: (T, T),
    x: T,
    order: usize,
) -> QiResult<T> {
    let (a, b) = domain;
    if order > d {
        return Err(QiError::InvalidOrder { order, degree: d });
    }
    if x < a || x > b {
        return Err(QiError::OutOfDomain { x: x.as_f64(), y: 0.0 });
    }
    let n = ((b - a) / h).round().to_usize().unwrap_or(0);
    if lambda.len() != n + d {
        return Err(QiError::MalformedSamples(format!(
            "expected {} coefficients, got {}",
            n + d,
            lambda.len()
        )));
    }
    let u = (x - a) / h;
    let c = u.floor().to_i64().unwrap_or(0).clamp(0, n as i64 - 1);
    let t = u - T::from_int(c);
    let vals = cell_basis(d, t, order);
    // translate i = c - d + m sits at slot c - d + m + d = c + m
    let mut acc = T::zero();
    for (m, &v) in vals.iter().enumerate().take(d + 1) {
        acc = acc + lambda[c as usize + m] * v;
    }
    Ok(acc / h.powi(order as i32))
}
