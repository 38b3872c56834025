//! The wire format and verdict assembly behind the command-line interface.
//!
//! Input documents are UTF-8 JSON; every number in them and in reports is an
//! exact rational string, never a float. Reports are byte-deterministic for
//! identical inputs.

mod reports;
mod run;
mod schema;

pub use reports::{render_pretty, Flag, Report, Verdict, VerdictStatus};
pub use run::{
    construct_affine_tangent, construct_nin_form, construct_product_extension, construct_prop81,
    run_command, verify_controlled, Command,
};
pub use schema::{parse_spec, serialize_spec, AnalysisSpec, Kind, Payload};
