//! Exact arithmetic over ℚ(x₁,…,xₙ): sparse polynomials, canonical rational
//! functions, and linear algebra over both the function field and ℚ.

mod linalg;
mod poly;
mod ratfunc;

pub use linalg::{
    coefficient_matrix, constant_relations, normalize_integer_vector, rational_kernel, rational_rank, rref,
    solve_linear, FieldMatrix, LinearCoordinates, LinearSolution,
};
pub use poly::{Monomial, PolyDisplay, Polynomial};
pub use ratfunc::{RatFunc, RatFuncDisplay};

/// Arbitrary-precision rational; kept in lowest terms with positive
/// denominator by `num-rational`.
pub type Rational = num_rational::BigRational;

/// Convenience constructor for small rationals.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Canonical `num/den`.
pub fn normalize(num: Polynomial, den: Polynomial) -> crate::Result<RatFunc> {
    RatFunc::new(num, den)
}
