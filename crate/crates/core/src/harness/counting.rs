//! Evaluation counts of the operators.

use crate::grid::Degrees;

/// Which functional family is being counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    /// Hermite data: four values per lattice point.
    Hermite,
    /// Point values on the subdivided lattice.
    Collocation,
}

/// `4 (N1 + 2 d1 - 1)(N2 + 2 d2 - 1)` or `(d1 (N1 + d1) + 1)(d2 (N2 + d2) + 1)`.
pub fn tensor_evaluations(op: Operator, degrees: Degrees, n1: usize, n2: usize) -> usize {
    let (d1, d2) = (degrees.d1, degrees.d2);
    match op {
        Operator::Hermite => 4 * (n1 + 2 * d1 - 1) * (n2 + 2 * d2 - 1),
        Operator::Collocation => (d1 * (n1 + d1) + 1) * (d2 * (n2 + d2) + 1),
    }
}

/// Evaluations implied by a number of distinct physical sample points.
pub fn evaluations_from_points(op: Operator, points: usize) -> usize {
    match op {
        Operator::Hermite => 4 * points,
        Operator::Collocation => points,
    }
}
