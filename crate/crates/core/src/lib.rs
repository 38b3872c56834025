//! Exact symbolic integrability analysis for tensor fields.
//!
//! The crate decides integrability-related criteria for tensor fields given
//! either in local coordinates with polynomial (rational-function)
//! coefficients or as left-invariant tensors on nilpotent Lie algebras.
//! Everything is computed over arbitrary-precision rationals, so every
//! "this tensor vanishes" verdict is a decidable exact statement, never a
//! floating-point guess.
//!
//! Module map:
//!
//! * [`scalar`] — rationals, sparse multivariate polynomials, and the
//!   GCD-free fraction field used as coefficients everywhere.
//! * [`tensor`] — charts, tensor fields, and the differential-geometric
//!   primitives (Lie bracket, exterior derivative, wedge, Lie and covariant
//!   derivatives, pointwise evaluation).
//! * [`linalg`] — exact rank/nullspace computations, nilpotent Jordan
//!   profiles, minimal polynomials, distribution involutivity and
//!   projectability.
//! * [`obstructions`] — the Nijenhuis-type obstruction tensors for (1,1)
//!   tensors, symmetric (0,2)/(2,0) tensors, bivectors and constant-rank
//!   morphisms, plus the Hodge star / contraction machinery they need.
//! * [`frames`] — Θ-orbit frame combinatorics on Lie algebras: bracket
//!   coefficient tables, kernel-integrability conditions, the three-orbit
//!   counterexample generator, and the controlled-type certifier.
//! * [`constructions`] — explicit generators: the affine-tangent
//!   construction, the non-integrable closed q-form, and leafwise-parallel
//!   product extensions.
//! * [`analysis`] — the JSON wire format, verdict assembly and report
//!   serialization used by the CLI.

// index loops mirror the coordinate formulas they implement
#![allow(clippy::needless_range_loop)]
#![allow(clippy::too_many_arguments)]
#![allow(clippy::type_complexity)]

pub mod analysis;
pub mod constructions;
pub mod error;
pub mod frames;
pub mod linalg;
pub mod obstructions;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
