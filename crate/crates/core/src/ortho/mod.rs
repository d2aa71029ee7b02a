//! The free orthocomplemented semilattice as a sequent calculus.
//!
//! Sequents `a1 ^ ... ^ an |- b` are closed by the rules
//!
//! - PRIME: prime members with `a1, ..., an |- b` in the relation;
//! - R31: `a |- b  =>  a ^ c |- b`;
//! - R32: `c |- a, c |- b  =>  c |- a ^ b`;
//! - R33: `a ^ b |- 0  =>  a |- ~b`;
//! - R34: `a |- b  =>  a ^ ~b |- c`.
//!
//! Association and transposition are absorbed by the list representation.
//! Contraction is not: no rule removes a duplicate, and its admissibility is
//! one of the audited properties.

mod audit;
mod check;
mod engine;
mod formula;
mod model;

pub use audit::{
    audit_admissible, random_queries, soundness_audit, AuditConfig, AuditReport, FormulaGen, Lemma,
    SoundnessReport, Strategy,
};
pub use engine::{Certificate, ConsistencyReport, Decision, DeriveOutcome, OrthoEngine};
pub use formula::{OrthoFormula, Sequent};
pub(crate) use formula::{resolve_name, shift};
pub use model::{compatible_assignments, eval_in_model, ortho_models, sequent_holds};
