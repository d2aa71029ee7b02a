//! Contraction is not admissible: the chain `0 < 1/k < ... < 1/2 < 1`,
//! `N = {1, ..., 1/k}`, `a = ~A{N}` and `N' = N + {a}`.

use std::sync::Arc;

use crate::order::PreorderedSet;
use crate::proof::Derivation;

use super::engine::CcEngine;
use super::formula::{CcFormula, CcSequent};
use super::CcOptions;

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub k: usize,
    pub engine: CcEngine,
    /// `A{N}`
    pub forall_n: CcFormula,
    /// `~A{N}`
    pub a: CcFormula,
    /// `A{N'}`
    pub forall_n_prime: CcFormula,
}

/// Builds the finitized instance; `k >= 2`.
pub fn counterexample(k: usize) -> Counterexample {
    assert!(k >= 2, "k must be at least 2");
    let mut names = vec!["0".to_string()];
    names.extend((2..=k).rev().map(|i| format!("1/{i}")));
    names.push("1".to_string());
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let base = Arc::new(PreorderedSet::chain(&refs));
    let n: Vec<CcFormula> = base
        .elements()
        .filter(|&e| Some(e) != base.zero())
        .map(CcFormula::Prime)
        .collect();
    let forall_n = CcFormula::forall(n.clone()).expect("k >= 2");
    let a = CcFormula::neg(forall_n.clone());
    let mut n_prime = n;
    n_prime.push(a.clone());
    let forall_n_prime = CcFormula::forall(n_prime).expect("nonempty");
    Counterexample {
        k,
        engine: CcEngine::free(base).expect("bounded chain"),
        forall_n,
        a,
        forall_n_prime,
    }
}

#[derive(Clone, Debug)]
pub struct CounterexampleCheck {
    pub label: &'static str,
    pub sequent: String,
    pub contraction: bool,
    pub variant: bool,
    pub expected: bool,
    /// `None` when the budget ran out.
    pub outcome: Option<bool>,
    pub explored: usize,
}

impl CounterexampleCheck {
    pub fn passed(&self) -> bool {
        self.outcome == Some(self.expected)
    }
}

#[derive(Clone, Debug)]
pub struct CounterexampleReport {
    pub k: usize,
    pub base: String,
    pub checks: Vec<CounterexampleCheck>,
    /// Derivation of `A{N'} ^ A{N'} |-` without contraction.
    pub positive: Option<Derivation<CcSequent>>,
    /// The positive derivation passed the checker.
    pub positive_accepted: bool,
}

impl CounterexampleReport {
    pub fn passed(&self) -> bool {
        self.positive_accepted && self.checks.iter().all(CounterexampleCheck::passed)
    }
}

/// Runs the queries of the counterexample. The contraction-on query is
/// included when `with_contraction` is set.
pub fn counterexample_report(k: usize, with_contraction: bool, budget: usize) -> CounterexampleReport {
    let cx = counterexample(k);
    let e = &cx.engine;
    let base = e.base();
    let twice = CcSequent::new(base, [cx.forall_n_prime.clone(), cx.forall_n_prime.clone()], []);
    let once = CcSequent::new(base, [cx.forall_n_prime.clone()], []);
    let neg = CcSequent::new(base, [cx.a.clone()], []);
    let mut queries = vec![
        ("doubled A{N'} refutes", &twice, false, false, true),
        ("single A{N'} does not refute", &once, false, false, false),
        ("~A{N} does not refute", &neg, false, false, false),
    ];
    if with_contraction {
        queries.push(("single A{N'} refutes with contraction", &once, true, false, true));
    }
    queries.push(("single A{N'} does not refute with multi-witness rules", &once, false, true, false));
    let mut positive = None;
    let mut positive_accepted = false;
    let checks = queries
        .into_iter()
        .map(|(label, s, contraction, variant, expected)| {
            let options = CcOptions {
                contraction,
                multi_premise_variant: variant,
                budget,
            };
            let out = e.derive(s, &options);
            if std::ptr::eq(s, &twice) {
                if let Some(p) = out.proof() {
                    positive_accepted = e.check(p, &options).is_ok();
                    positive = Some(p.clone());
                }
            }
            CounterexampleCheck {
                label,
                sequent: s.display(base).to_string(),
                contraction,
                variant,
                expected,
                outcome: out.verdict(),
                explored: out.explored(),
            }
        })
        .collect();
    CounterexampleReport {
        k,
        base: base.to_string(),
        checks,
        positive,
        positive_accepted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::RuleTag;

    #[test]
    fn instance_shape() {
        let cx = counterexample(3);
        let base = cx.engine.base();
        assert_eq!(base.names(), &["0", "1/3", "1/2", "1"]);
        assert_eq!(cx.forall_n.display(base).to_string(), "A{1/3, 1/2, 1}");
        assert_eq!(cx.forall_n_prime.display(base).to_string(), "A{1/3, 1/2, 1, ~A{1/3, 1/2, 1}}");
    }

    #[test]
    fn positive_derivation_follows_the_expected_route() {
        let r = counterexample_report(3, true, 1_000_000);
        let p = r.positive.as_ref().unwrap();
        assert!(r.positive_accepted);
        assert_eq!(p.rule, RuleTag::CcForallLeft);
        assert!(!p.rules_used().contains(&RuleTag::CcContract));
        let core: Vec<_> = r.checks.iter().filter(|c| !c.variant).collect();
        assert!(core.iter().all(|c| c.passed()), "{core:?}");
    }
}
