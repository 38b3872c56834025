//! Charts, tensor fields with exact rational-function components, and the
//! differential-geometric primitives: Lie bracket, exterior derivative,
//! wedge product, Lie derivative, covariant derivative, and pointwise
//! evaluation.
//!
//! Charts are single coordinate patches; every criterion in this crate is
//! local, so there are no atlases or transition maps.

mod calculus;
mod chart;
mod connection;
mod field;

pub use calculus::{
    covariant_derivative, exterior_derivative, increasing_tuples, lie_bracket, lie_derivative_02,
    merge_sign, wedge_product,
};
pub use chart::Chart;
pub use connection::ConnectionCoefficients;
pub use field::{Symmetry, TensorField};
