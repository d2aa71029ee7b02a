//! The countably complete boolean calculus, restricted to finite sets `N`.
//!
//! Sequents `a1 ^ ... ^ am |- b1 v ... v bn` are closed by PRIME (the
//! relation on prime members), contraction when enabled, and the
//! left/right rules for `v`, `^`, `~`, `A{..}` and `E{..}`, with weakening
//! on either side. `1` on the left and `0` on the right are dropped as
//! soon as they appear.

mod audit;
mod check;
mod counterexample;
mod engine;
mod formula;

pub use audit::{cc_audit, CcAuditConfig, CcAuditReport, CcGen, CcLemma};
pub use check::CcCalculus;
pub use counterexample::{counterexample, counterexample_report, Counterexample, CounterexampleCheck, CounterexampleReport};
pub use engine::{CcEngine, CcOutcome};
pub use formula::{CcFormula, CcSequent, Side};

/// Search and checking options.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CcOptions {
    /// Allow the contraction rule.
    pub contraction: bool,
    /// Use the multi-witness forms of the `A{..}`-left and `E{..}`-right rules.
    pub multi_premise_variant: bool,
    /// Maximum number of distinct sequents a search may expand.
    pub budget: usize,
}

impl Default for CcOptions {
    fn default() -> Self {
        CcOptions {
            contraction: true,
            multi_premise_variant: false,
            budget: 1_000_000,
        }
    }
}
