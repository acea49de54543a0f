//! Cardinal B-spline kernel on integer knots.
//!
//! `B_d` has knots `0, 1, ..., d + 1`. Evaluation follows the Cox-de Boor
//! recursion with half-open knot intervals, so `B_d` is right-continuous at
//! breakpoints. Grid evaluation goes through [`cell_basis`], which returns the
//! `d + 1` translates that are non-zero on a unit cell and picks polynomial
//! pieces by cell, not by point, so the right boundary of a domain is closed.

use num_rational::Ratio;

use crate::error::{QiError, QiResult};
use crate::scalar::Scalar;

/// Largest degree accepted by [`cell_basis`].
pub const MAX_CELL_DEGREE: usize = 8;

/// Fixed-capacity buffer of per-cell basis values; entries `0..=d` are valid.
pub type CellValues<T> = [T; MAX_CELL_DEGREE + 1];

fn check_degree(d: usize) -> QiResult<()> {
    if d < 1 {
        Err(QiError::InvalidDegree(d as i64))
    } else {
        Ok(())
    }
}

fn eval_unchecked<T: Scalar>(d: usize, x: T) -> T {
    if d == 0 {
        return if x >= T::zero() && x < T::one() { T::one() } else { T::zero() };
    }
    if x < T::zero() || x >= T::from_usize(d + 1).unwrap() {
        return T::zero();
    }
    let p = T::from_usize(d).unwrap();
    let left = eval_unchecked(d - 1, x);
    let right = eval_unchecked(d - 1, x - T::one());
    (x * left + (p + T::one() - x) * right) / p
}

/// Value of the cardinal B-spline `B_d(x)`.
pub fn bspline_eval<T: Scalar>(d: usize, x: T) -> QiResult<T> {
    check_degree(d)?;
    Ok(eval_unchecked(d, x))
}

fn deriv_unchecked<T: Scalar>(d: usize, x: T, order: usize) -> T {
    if order == 0 {
        return eval_unchecked(d, x);
    }
    deriv_unchecked(d - 1, x, order - 1) - deriv_unchecked(d - 1, x - T::one(), order - 1)
}

/// `order`-th derivative of `B_d` at `x`, via `B_d' = B_{d-1}(x) - B_{d-1}(x - 1)`.
pub fn bspline_deriv<T: Scalar>(d: usize, x: T, order: usize) -> QiResult<T> {
    check_degree(d)?;
    if order > d {
        return Err(QiError::InvalidOrder { order, degree: d });
    }
    Ok(deriv_unchecked(d, x, order))
}

/// Two-scale coefficients `c_k = 2^{-d} binom(d + 1, k)` as exact rationals.
pub fn subdivision_coeffs_exact(d: usize) -> QiResult<Vec<Ratio<i64>>> {
    check_degree(d)?;
    let denom = 1i64 << d;
    let mut binom = 1i64;
    let mut out = Vec::with_capacity(d + 2);
    for k in 0..=(d + 1) {
        out.push(Ratio::new(binom, denom));
        binom = binom * (d as i64 + 1 - k as i64) / (k as i64 + 1);
    }
    Ok(out)
}

/// Two-scale coefficients: `B_d(x) = sum_k c_k B_d(2x - k)`, `k = 0..=d+1`.
pub fn subdivision_coeffs<T: Scalar>(d: usize) -> QiResult<Vec<T>> {
    Ok(subdivision_coeffs_exact(d)?
        .into_iter()
        .map(|r| T::from_int(*r.numer()) / T::from_int(*r.denom()))
        .collect())
}

/// Refines a univariate coefficient vector from a level with `N` cells to the
/// dyadic level with `2N` cells.
///
/// Input is indexed `-d..N-1` (length `N + d`), output `-d..2N-1`. Fine
/// functions whose support misses the domain are dropped.
pub fn refine_coeffs_1d<T: Scalar>(d: usize, coeffs: &[T]) -> QiResult<Vec<T>> {
    check_degree(d)?;
    if coeffs.len() < d + 1 {
        return Err(QiError::MalformedSamples(format!(
            "need at least {} coefficients for degree {d}, got {}",
            d + 1,
            coeffs.len()
        )));
    }
    let stencil = subdivision_coeffs::<T>(d)?;
    let n = (coeffs.len() - d) as i64;
    let di = d as i64;
    let mut out = vec![T::zero(); (2 * n + di) as usize];
    for (pos, &c) in coeffs.iter().enumerate() {
        let i = pos as i64 - di;
        for (k, &w) in stencil.iter().enumerate() {
            let f = 2 * i + k as i64;
            if f >= -di && f < 2 * n {
                out[(f + di) as usize] = out[(f + di) as usize] + w * c;
            }
        }
    }
    Ok(out)
}

/// Values at local coordinate `t` in `[0, 1]` of the `d + 1` translates
/// non-zero on the unit cell `[0, 1]`.
///
/// Entry `m` is `B_d^{(order)}(t + d - m)`, i.e. the translate whose support
/// starts `d - m` cells to the left. `order` must not exceed `d`.
pub fn cell_basis<T: Scalar>(d: usize, t: T, order: usize) -> CellValues<T> {
    assert!(d <= MAX_CELL_DEGREE, "degree {d} exceeds MAX_CELL_DEGREE");
    assert!(order <= d, "derivative order {order} exceeds degree {d}");
    let low = d - order;
    let mut v = [T::zero(); MAX_CELL_DEGREE + 1];
    v[0] = T::one();
    for p in 1..=low {
        let pt = T::from_usize(p).unwrap();
        let mut next = [T::zero(); MAX_CELL_DEGREE + 1];
        for m in 0..=p {
            let mut acc = T::zero();
            if m >= 1 {
                acc = acc + (t + pt - T::from_usize(m).unwrap()) * v[m - 1];
            }
            if m < p {
                acc = acc + (T::one() - t + T::from_usize(m).unwrap()) * v[m];
            }
            next[m] = acc / pt;
        }
        v = next;
    }
    if order == 0 {
        return v;
    }
    // B_d^{(r)}(u) = sum_k (-1)^k binom(r, k) B_{d-r}(u - k)
    let mut out = [T::zero(); MAX_CELL_DEGREE + 1];
    let mut binom = [0i64; MAX_CELL_DEGREE + 1];
    binom[0] = 1;
    for k in 1..=order {
        binom[k] = binom[k - 1] * (order as i64 + 1 - k as i64) / k as i64;
    }
    for (m, slot) in out.iter_mut().enumerate().take(d + 1) {
        let mut acc = T::zero();
        for (k, &b) in binom.iter().enumerate().take(order + 1) {
            let idx = m as i64 + k as i64 - order as i64;
            if idx >= 0 && idx <= low as i64 {
                let term = T::from_int(b) * v[idx as usize];
                acc = if k % 2 == 0 { acc + term } else { acc - term };
            }
        }
        *slot = acc;
    }
    out
}
