//! Frozen values from the independent oracles, and the library checked
//! against them.

mod common;

use std::collections::HashSet;

use common::*;
use freelat_core::distributive::{chain_valuation_oracle, dnf_leq, monotone_valuations, to_dnf};
use freelat_core::order::{enumerate_preorders, ArityMode, Elem, EntailmentRelation, PreorderedSet};
use freelat_core::ortho::{OrthoEngine, Sequent};
use freelat_core::semilattice::{meet_leq, MeetWord};

#[test]
fn labelled_preorder_counts() {
    let counts: Vec<usize> = (1..=3).map(|n| preorders(n).len()).collect();
    assert_eq!(counts, [1, 4, 29]);
    let posets: Vec<usize> = (1..=3)
        .map(|n| preorders(n).iter().filter(|m| is_antisymmetric(m)).count())
        .collect();
    assert_eq!(posets, [1, 3, 19]);
    assert_eq!(enumerate_preorders(3).len(), 29);
}

#[test]
fn word_counts() {
    assert_eq!(words(3, 3).len(), 39);
    assert_eq!(terms(3, 3).len(), 1_566_453);
    assert_eq!(terms(2, 2).len(), 2 + 2 * (2 + 2 * 4) * (2 + 2 * 4));
}

fn antichain(n: usize) -> std::sync::Arc<PreorderedSet> {
    base_of(&(0..n).map(|a| (0..n).map(|b| a == b).collect()).collect())
}

#[test]
fn filter_oracle_closed_forms() {
    // antichain: w1 <= w2 iff the factors of w2 occur in w1
    let base = antichain(3);
    for w1 in words(3, 3) {
        for w2 in words(3, 3) {
            let contained = w2.iter().all(|e| w1.contains(e));
            assert_eq!(word_leq(&base, &w1, &w2), contained);
        }
    }
    // chain m0 < m1 < m2: compare the least factors
    let chain = base_of(&(0..3).map(|a| (0..3).map(|b| a <= b).collect()).collect());
    for w1 in words(3, 3) {
        for w2 in words(3, 3) {
            let lo = |w: &[Elem]| w.iter().map(|e| e.0).min().unwrap();
            assert_eq!(word_leq(&chain, &w1, &w2), lo(&w1) <= lo(&w2));
        }
    }
}

fn classes<T>(items: &[T], leq: impl Fn(&T, &T) -> bool) -> usize {
    let mut reps: Vec<&T> = Vec::new();
    for x in items {
        if !reps.iter().any(|r| leq(r, x) && leq(x, r)) {
            reps.push(x);
        }
    }
    reps.len()
}

#[test]
fn free_semilattice_sizes() {
    // nonempty subsets of a 3-antichain; a 3-chain collapses to itself
    let base = antichain(3);
    let rel = EntailmentRelation::free(base.clone(), ArityMode::OneSided);
    let ws: Vec<MeetWord> = words(3, 3).into_iter().map(|w| MeetWord::new(&base, w).unwrap()).collect();
    assert_eq!(classes(&ws, |a, b| meet_leq(&rel, a, b)), 7);
    let chain = base_of(&(0..3).map(|a| (0..3).map(|b| a <= b).collect()).collect());
    let rel = EntailmentRelation::free(chain.clone(), ArityMode::OneSided);
    assert_eq!(classes(&ws, |a, b| meet_leq(&rel, a, b)), 3);
}

#[test]
fn free_distributive_sizes() {
    // the 3-generated free distributive lattice has 18 elements: the
    // monotone boolean functions of three variables minus the constants
    let tables: HashSet<u64> = terms(3, 3).iter().map(|t| truth_table(3, |v| eval_term(t, v))).collect();
    assert_eq!(tables.len(), 18);
    let tables2: HashSet<u64> = terms(2, 3).iter().map(|t| truth_table(2, |v| eval_term(t, v))).collect();
    assert_eq!(tables2.len(), 4);

    let base = antichain(3);
    let rel = EntailmentRelation::free(base.clone(), ArityMode::TwoSided);
    let mut keys = HashSet::new();
    let dnfs: Vec<_> = terms(3, 3)
        .iter()
        .map(to_dnf)
        .filter(|d| keys.insert(d.syntactic_key()))
        .collect();
    assert_eq!(classes(&dnfs, |a, b| dnf_leq(&rel, a, b)), 18);
}

#[test]
fn monotone_valuation_counts() {
    // up-sets of a 3-antichain, a 3-chain, and the bounded square
    assert_eq!(valuations(&antichain(3)).len(), 8);
    let chain = base_of(&(0..3).map(|a| (0..3).map(|b| a <= b).collect()).collect());
    assert_eq!(valuations(&chain).len(), 4);
    let square = parse(SQUARE);
    assert_eq!(valuations(&square).len(), 4);
    assert_eq!(monotone_valuations(&square), valuations(&square));
}

#[test]
fn library_oracle_matches_truth_tables() {
    let base = antichain(2);
    for x in terms(2, 2) {
        for y in terms(2, 1) {
            let tx = truth_table(2, |v| eval_term(&x, v));
            let ty = truth_table(2, |v| eval_term(&y, v));
            assert_eq!(chain_valuation_oracle(&base, &x, &y), tx & !ty == 0);
        }
    }
}

#[test]
fn ortho_facts_on_the_square() {
    let base = parse(SQUARE);
    let e = OrthoEngine::free(base.clone()).unwrap();
    let holds = |q: &str| e.decide_sequent(&Sequent::parse(&base, q).unwrap()).derivable;
    // p ^ ~p <= 0 by negation, p <= ~~p from it, and antitonicity
    assert!(holds("p ^ ~p |- 0"));
    assert!(holds("p |- ~~p"));
    assert!(holds("~p |- ~(p ^ q)"));
    assert!(holds("0 |- p"));
    assert!(holds("p |- 1"));
    // refuted in the two-element algebra
    for q in ["1 |- 0", "p |- q", "~(p ^ q) |- ~p", "1 |- p"] {
        let s = Sequent::parse(&base, q).unwrap();
        assert!(!ortho_valid(&base, &s), "{q}");
        assert!(!holds(q), "{q}");
    }
}
