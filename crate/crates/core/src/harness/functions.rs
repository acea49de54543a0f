//! Built-in test functions with closed-form partial derivatives of any order.
//!
//! New functions plug in by implementing [`TestFunction`].

use crate::provider::{HermiteProvider, SamplePoint, ValueSource};
use crate::error::QiResult;
use crate::scalar::Scalar;
use crate::tensor::HermiteSample;

pub trait TestFunction<T: Scalar>: Send + Sync {
    fn name(&self) -> &str;

    /// `d^{a+b} f / dx^a dy^b`.
    fn deriv(&self, x: T, y: T, a: usize, b: usize) -> T;

    fn value(&self, x: T, y: T) -> T {
        self.deriv(x, y, 0, 0)
    }

    fn hermite(&self, x: T, y: T) -> HermiteSample<T> {
        HermiteSample {
            f: self.deriv(x, y, 0, 0),
            fx: self.deriv(x, y, 1, 0),
            fy: self.deriv(x, y, 0, 1),
            fxy: self.deriv(x, y, 1, 1),
        }
    }
}

/// `(tanh(9y - 9x) + 1) / 9`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Tanh;

/// `(2/3) exp(-(10x - 3)^2 - (10y + 4)^2)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Bump;

/// Coefficients of `P_n` with `tanh^{(n)}(u) = P_n(tanh u)`.
fn tanh_poly(n: usize) -> Vec<f64> {
    let mut p = vec![0.0, 1.0];
    for _ in 0..n {
        // P' (1 - t^2)
        let dp: Vec<f64> = (1..p.len()).map(|k| k as f64 * p[k]).collect();
        let mut q = vec![0.0; dp.len() + 2];
        for (k, &c) in dp.iter().enumerate() {
            q[k] += c;
            q[k + 2] -= c;
        }
        p = q;
    }
    p
}

fn horner<T: Scalar>(coeffs: &[f64], t: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * t + T::lit(c))
}

/// Physicists' Hermite polynomial `H_n(u)`.
fn hermite_poly<T: Scalar>(n: usize, u: T) -> T {
    let two = T::lit(2.0);
    let (mut a, mut b) = (T::one(), two * u);
    if n == 0 {
        return a;
    }
    for k in 1..n {
        let c = two * u * b - two * T::from_int(k as i64) * a;
        a = b;
        b = c;
    }
    b
}

impl<T: Scalar> TestFunction<T> for Tanh {
    fn name(&self) -> &str {
        "f1"
    }

    fn deriv(&self, x: T, y: T, a: usize, b: usize) -> T {
        let nine = T::lit(9.0);
        let t = (nine * (y - x)).tanh();
        let n = a + b;
        let v = horner(&tanh_poly(n), t);
        if n == 0 {
            return (v + T::one()) / nine;
        }
        let sign = if a % 2 == 1 { -T::one() } else { T::one() };
        sign * nine.powi(n as i32 - 1) * v
    }
}

impl<T: Scalar> TestFunction<T> for Bump {
    fn name(&self) -> &str {
        "f2"
    }

    fn deriv(&self, x: T, y: T, a: usize, b: usize) -> T {
        let ten = T::lit(10.0);
        let u = ten * x - T::lit(3.0);
        let v = ten * y + T::lit(4.0);
        // d^n/ds^n exp(-(10 s - c)^2) = (-10)^n H_n(u) exp(-u^2)
        let gx = (-ten).powi(a as i32) * hermite_poly(a, u) * (-u * u).exp();
        let gy = (-ten).powi(b as i32) * hermite_poly(b, v) * (-v * v).exp();
        T::lit(2.0) / T::lit(3.0) * gx * gy
    }
}

pub fn builtin<T: Scalar>(name: &str) -> Option<Box<dyn TestFunction<T>>> {
    match name {
        "f1" => Some(Box::new(Tanh)),
        "f2" => Some(Box::new(Bump)),
        _ => None,
    }
}

/// Exact Hermite data of a test function.
pub struct HermiteOf<'a, T>(pub &'a dyn TestFunction<T>);

impl<T: Scalar> HermiteProvider<T> for HermiteOf<'_, T> {
    fn hermite(&self, p: &SamplePoint<T>) -> QiResult<HermiteSample<T>> {
        Ok(self.0.hermite(p.x, p.y))
    }
}

/// Values of a test function.
pub struct ValuesOf<'a, T>(pub &'a dyn TestFunction<T>);

impl<T: Scalar> ValueSource<T> for ValuesOf<'_, T> {
    fn value(&self, p: &SamplePoint<T>) -> QiResult<T> {
        Ok(self.0.value(p.x, p.y))
    }
}
