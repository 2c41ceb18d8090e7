//! Generators for hardness constructions and succinctness families.

mod bounded;
mod existence;
mod gadget;
pub mod qbf;
mod sat_family;

pub use bounded::{reduce_qbf2_bounded_pos, reduce_qbf3_bounded};
pub use existence::{reduce_qbf2_epistemic, reduce_qbf_wfoe, reduce_unsat_positive, reduce_wfoe_wfe};
pub use gadget::{live_actions, mutants, problem_from_kbp, Gadget};
pub use qbf::{qbf_eval, random_qbf, small_matrices, Qbf, Quantifier};
pub use sat_family::{gen_3sat_family, slot_bits, Literal, SatFamily};
