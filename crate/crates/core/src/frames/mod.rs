//! Θ-orbit frame combinatorics on Lie algebras.
//!
//! A frame realizing the Jordan normal form of a nilpotent (1,1) tensor
//! splits into Θ-orbits e₁,…,e_d with Θe₁ = 0 and Θeᵢ = e_{i−1}. For a
//! left-invariant frame the Nijenhuis tensor and the kernel-integrability
//! conditions become finite linear conditions on the bracket coefficient
//! table, evaluated here exactly over the rationals.

mod controlled;
mod realize;
mod spec;

pub use controlled::{controlled_type_verifier, ControlledVerdict};
pub use realize::{realize_on_chart, realized_kernel_span, Realization};
pub use spec::{
    build_counterexample, counterexample_within_profile, frame_nijenhuis_vanishes, jacobi_check,
    kernel_integrability_frame, reindex_c_e, ECoefficients, EWitness, LieFrameSpec,
};
