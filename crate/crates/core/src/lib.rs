//! Decision procedures for free lattice-like structures over a finite
//! preordered set.
//!
//! - [`order`]: preordered sets, entailment relations, homomorphism checks.
//! - [`semilattice`]: the free semilattice as meet-words.
//! - [`distributive`]: the free distributive lattice as joins of meet-words.
//! - [`ortho`]: proof search for the free orthocomplemented semilattice.
//! - [`cc`]: the countably complete boolean calculus over finite sets `N`.
//! - [`proof`]: derivation trees, their checker and text format.

pub mod error;
pub mod order;
pub mod semilattice;
pub mod distributive;
pub mod ortho;
pub mod cc;
pub mod proof;
mod syntax;

pub use error::{EngineError, OrderError, ProofError, SyntaxError};
