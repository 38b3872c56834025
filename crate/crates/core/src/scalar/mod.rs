//! Exact scalar arithmetic: arbitrary-precision rationals, sparse
//! multivariate polynomials, and a GCD-free fraction field with decidable
//! zero testing.
//!
//! This is the numeric substrate for every other module. All values are
//! immutable after construction and every operation is a pure function.

mod field;
mod parse;
mod poly;
pub mod rational;

pub use field::ScalarField;
pub use parse::{parse_polynomial, parse_scalar_field};
pub use poly::Polynomial;
pub use rational::Rational;
