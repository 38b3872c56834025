//! Exact linear algebra over the rationals and over the scalar-field
//! fraction field: rank, nullspace, inverses, minimal polynomials, nilpotent
//! Jordan profiles, and the distribution predicates built on them.

mod matrix;
mod profile;
mod spans;
mod unipoly;

pub use matrix::{Entry, Matrix};
pub use profile::{
    all_profiles, certified_nilpotent_profile, csd_predicate, jordan_matrix, jordan_profile,
    profile_from_ranks, rank_from_profile, JordanProfile,
};
pub use spans::{
    distribution_integrability, distribution_projectability, span_membership, BracketWitness,
    IntegrabilityVerdict, VectorFieldSpan,
};
pub use unipoly::{complex_diagonalizable, minimal_polynomial, UniPoly};
