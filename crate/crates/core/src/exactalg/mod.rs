//! Exact scalars, Laurent polynomials and dense rational linear algebra.
//!
//! Nothing in here touches floating point.

mod laurent;
mod matrix;
mod rational;

pub use laurent::LaurentPoly;
pub use matrix::{LinearSolution, RatMatrix};
pub use rational::{parse_rational, rat, serde_rational, serde_rational_vec, Rational};

/// `floor(a / b)` for `b > 0`.
pub fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// `ceil(a / b)` for `b > 0`.
pub fn ceil_div(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}
