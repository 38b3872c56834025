//! The Nijenhuis-type obstruction tensors.
//!
//! For each class of tensor field analyzed by this crate there is an
//! obstruction whose exact vanishing characterizes (or is necessary for)
//! integrability:
//!
//! * (1,1) tensors — the classical Nijenhuis tensor, plus the family of
//!   kernel obstructions for nilpotent tensors;
//! * symmetric (0,2) tensors — the pair `n_prime` / `n_double_prime`;
//! * constant-rank morphisms into the cotangent bundle — `n_tilde`;
//! * symmetric or antisymmetric (2,0) tensors — `n_hat`, built from the
//!   Hodge star and a metric contraction, plus the restriction-inverse
//!   machinery that decides the bivector case;
//! * square roots of c·Id — the natural projection onto connections making
//!   them parallel.
//!
//! Every vanishing verdict is cross-validated against the corresponding
//! distribution-level test where a second route exists.

mod background;
mod hodge;
mod images;
mod kernels;
mod nijenhuis11;

pub use background::{MorphismField, RiemannianBackground};
pub use hodge::{contraction_22, hodge_star, star_scaled};
pub use images::{image_span, n_hat, restriction_inverse, NHatOutcome, RestrictionOutcome};
pub use kernels::{
    adapted_trivialization, kernel_nijenhuis_family, kernel_span, n_double_prime, n_prime, n_tilde,
    sym02_morphism, KernelObstruction, SlotWitness, VanishingOutcome,
};
pub use nijenhuis11::{
    connection_projection, nijenhuis_11, nijenhuis_via_connection, ConnectionProjection,
};
