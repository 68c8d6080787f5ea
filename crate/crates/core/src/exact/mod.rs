//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers; there is no
//! fixed-width fast path. The matrices this crate deals with are small (at
//! most a few dozen rows) but intermediate values of fraction-free
//! elimination outgrow 64 bits quickly.

mod matrix;
mod normal_form;
mod solve;

pub use matrix::{dot, int_vec, pairing, IntMatrix, IntVector};
pub(crate) use normal_form::bezout;
pub use normal_form::{det_exact, hermite_normal_form, smith_normal_form, Hnf, Snf};
pub use solve::{
    column_span_key, integer_kernel, same_column_span, saturate, solve_rational, RationalVector,
    Solution,
};

use num_bigint::BigInt;
use num_rational::BigRational;

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Reduces `x` into the half-open interval `[0, modulus)`.
pub fn reduce_mod(x: &BigRational, modulus: &BigRational) -> BigRational {
    let q = (x / modulus).floor();
    x - q * modulus
}
