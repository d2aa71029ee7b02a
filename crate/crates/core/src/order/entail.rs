use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::OrderError;

use super::{Elem, PreorderedSet};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArityMode {
    /// `a1, ..., an |- b`
    OneSided,
    /// `a1, ..., am |- b1, ..., bn`
    TwoSided,
}

impl ArityMode {
    pub fn label(self) -> &'static str {
        match self {
            ArityMode::OneSided => "one-sided",
            ArityMode::TwoSided => "two-sided",
        }
    }
}

type DecideFn = dyn Fn(&PreorderedSet, &[Elem], &[Elem]) -> bool + Send + Sync;

#[derive(Clone)]
enum Decider {
    Free,
    Custom(Arc<DecideFn>),
}

/// A finite-place relation `lhs |- rhs` over the generators of a base set.
///
/// The free relation holds iff some left element is below some right element.
/// Custom relations are arbitrary predicates; whether they satisfy the closure
/// conditions is checked with [`check_entailment_axioms`], not assumed.
#[derive(Clone)]
pub struct EntailmentRelation {
    base: Arc<PreorderedSet>,
    mode: ArityMode,
    decider: Decider,
}

impl fmt::Debug for EntailmentRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.decider {
            Decider::Free => "free",
            Decider::Custom(_) => "custom",
        };
        f.debug_struct("EntailmentRelation")
            .field("mode", &self.mode)
            .field("decider", &kind)
            .field("base", &self.base.names())
            .finish()
    }
}

impl EntailmentRelation {
    pub fn free(base: Arc<PreorderedSet>, mode: ArityMode) -> Self {
        EntailmentRelation {
            base,
            mode,
            decider: Decider::Free,
        }
    }

    pub fn custom<F>(base: Arc<PreorderedSet>, mode: ArityMode, decide: F) -> Self
    where
        F: Fn(&PreorderedSet, &[Elem], &[Elem]) -> bool + Send + Sync + 'static,
    {
        EntailmentRelation {
            base,
            mode,
            decider: Decider::Custom(Arc::new(decide)),
        }
    }

    pub fn base(&self) -> &Arc<PreorderedSet> {
        &self.base
    }

    pub fn mode(&self) -> ArityMode {
        self.mode
    }

    pub fn is_free(&self) -> bool {
        matches!(self.decider, Decider::Free)
    }

    /// Decides `lhs |- rhs`. In one-sided mode `rhs` has exactly one element.
    pub fn entails(&self, lhs: &[Elem], rhs: &[Elem]) -> bool {
        debug_assert!(self.mode == ArityMode::TwoSided || rhs.len() == 1);
        match &self.decider {
            Decider::Free => lhs
                .iter()
                .any(|&a| rhs.iter().any(|&b| self.base.leq(a, b))),
            Decider::Custom(f) => f(&self.base, lhs, rhs),
        }
    }

    pub fn entails_one(&self, lhs: &[Elem], rhs: Elem) -> bool {
        self.entails(lhs, &[rhs])
    }

    /// The same relation read over the dual base: `rhs |- lhs` of the original.
    pub fn dual(&self) -> EntailmentRelation {
        let base = Arc::new(self.base.dual());
        match &self.decider {
            Decider::Free => EntailmentRelation::free(base, self.mode),
            Decider::Custom(f) => {
                let f = Arc::clone(f);
                let original = Arc::clone(&self.base);
                EntailmentRelation::custom(base, self.mode, move |_, l, r| f(&original, r, l))
            }
        }
    }
}

/// The free relation on names: some left element is below some right element.
pub fn free_entailment(
    base: &PreorderedSet,
    lhs: &[&str],
    rhs: &[&str],
    mode: ArityMode,
) -> Result<bool, OrderError> {
    if rhs.is_empty() || (mode == ArityMode::OneSided && rhs.len() != 1) {
        return Err(OrderError::EmptyRhs);
    }
    let lhs = lhs
        .iter()
        .map(|n| base.resolve(n))
        .collect::<Result<Vec<_>, _>>()?;
    let rhs = rhs
        .iter()
        .map(|n| base.resolve(n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(lhs.iter().any(|&a| rhs.iter().any(|&b| base.leq(a, b))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    /// Condition number 1..=4 of the closure conditions.
    pub condition: u8,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
    /// Pairs `(a, b)` where `a |- b` and `a <= b` disagree. Reported, not
    /// counted as violations.
    pub singleton_disagreements: Vec<(Elem, Elem)>,
    pub checked: usize,
}

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, condition: u8) -> bool {
        self.violations.iter().any(|v| v.condition == condition)
    }
}

fn seqs(n: usize, len: usize) -> impl Iterator<Item = Vec<Elem>> {
    std::iter::repeat_n(0..n, len)
        .multi_cartesian_product()
        .map(|v| v.into_iter().map(Elem).collect())
}

fn seqs_up_to(n: usize, min: usize, max: usize) -> Vec<Vec<Elem>> {
    (min..=max).flat_map(|len| seqs(n, len)).collect()
}

struct Reporter<'a> {
    base: &'a PreorderedSet,
    report: AxiomReport,
}

impl Reporter<'_> {
    fn show(&self, xs: &[Elem]) -> String {
        xs.iter().map(|&e| self.base.name(e)).join(", ")
    }

    fn fail(&mut self, condition: u8, witness: String) {
        // one witness per condition keeps the report readable
        if !self.report.violates(condition) {
            self.report
                .violations
                .push(AxiomViolation { condition, witness });
        }
    }
}

/// Bounded-exhaustive check of the four closure conditions.
///
/// One-sided mode inspects every left sequence of length at most `bound`;
/// two-sided mode every sequent with `|lhs| + |rhs| <= bound + 1`.
pub fn check_entailment_axioms(rel: &EntailmentRelation, bound: usize) -> AxiomReport {
    let bound = bound.max(2);
    let base = rel.base().as_ref();
    let n = base.len();
    let mut r = Reporter {
        base,
        report: AxiomReport::default(),
    };
    for a in base.elements() {
        r.report.checked += 1;
        if !rel.entails(&[a], &[a]) {
            let w = format!("{0} |- {0}", base.name(a));
            r.fail(1, w);
        }
        for b in base.elements() {
            if rel.entails(&[a], &[b]) != base.leq(a, b) {
                r.report.singleton_disagreements.push((a, b));
            }
        }
    }
    match rel.mode() {
        ArityMode::OneSided => one_sided(rel, n, bound, &mut r),
        ArityMode::TwoSided => two_sided(rel, n, bound, &mut r),
    }
    r.report
}

fn one_sided(rel: &EntailmentRelation, n: usize, bound: usize, r: &mut Reporter<'_>) {
    let shorter = seqs_up_to(n, 1, bound - 1);
    for lhs in &shorter {
        for b in (0..n).map(Elem) {
            let holds = rel.entails(lhs, &[b]);
            for c in (0..n).map(Elem) {
                r.report.checked += 2;
                let mut ext = lhs.clone();
                ext.push(c);
                if holds && !rel.entails(&ext, &[b]) {
                    let w = format!("{} |- {} but not with {}", r.show(lhs), r.base.name(b), r.base.name(c));
                    r.fail(2, w);
                }
                // cut: lhs |- c and lhs, c |- b give lhs |- b
                if !holds && rel.entails(lhs, &[c]) && rel.entails(&ext, &[b]) {
                    let w = format!(
                        "({}; {}; {})",
                        r.show(lhs),
                        r.base.name(c),
                        r.base.name(b)
                    );
                    r.fail(4, w);
                }
            }
        }
    }
    for lhs in seqs_up_to(n, 2, bound) {
        for b in (0..n).map(Elem) {
            if !rel.entails(&lhs, &[b]) {
                continue;
            }
            for i in 0..lhs.len() - 1 {
                r.report.checked += 1;
                let mut swapped = lhs.clone();
                swapped.swap(i, i + 1);
                if !rel.entails(&swapped, &[b]) {
                    let w = format!("{} |- {} but not after swapping {i}", r.show(&lhs), r.base.name(b));
                    r.fail(3, w);
                }
            }
        }
    }
}

fn two_sided(rel: &EntailmentRelation, n: usize, bound: usize, r: &mut Reporter<'_>) {
    let all = seqs_up_to(n, 1, bound);
    for lhs in &all {
        for rhs in &all {
            let total = lhs.len() + rhs.len();
            if total > bound + 1 {
                continue;
            }
            let holds = rel.entails(lhs, rhs);
            if holds {
                for i in 0..lhs.len().saturating_sub(1) {
                    r.report.checked += 1;
                    let mut s = lhs.clone();
                    s.swap(i, i + 1);
                    if !rel.entails(&s, rhs) {
                        let w = format!("{} |- {}: left swap {i}", r.show(lhs), r.show(rhs));
                        r.fail(3, w);
                    }
                }
                for i in 0..rhs.len().saturating_sub(1) {
                    r.report.checked += 1;
                    let mut s = rhs.clone();
                    s.swap(i, i + 1);
                    if !rel.entails(lhs, &s) {
                        let w = format!("{} |- {}: right swap {i}", r.show(lhs), r.show(rhs));
                        r.fail(3, w);
                    }
                }
            }
            if total > bound {
                continue;
            }
            for c in (0..n).map(Elem) {
                r.report.checked += 3;
                let mut left = lhs.clone();
                left.push(c);
                let mut right = vec![c];
                right.extend_from_slice(rhs);
                if holds && !rel.entails(&left, rhs) {
                    let w = format!("{} |- {}: left weakening by {}", r.show(lhs), r.show(rhs), r.base.name(c));
                    r.fail(2, w);
                }
                if holds && !rel.entails(lhs, &right) {
                    let w = format!("{} |- {}: right weakening by {}", r.show(lhs), r.show(rhs), r.base.name(c));
                    r.fail(2, w);
                }
                if !holds && rel.entails(&left, rhs) && rel.entails(lhs, &right) {
                    let w = format!("({}; {}; {})", r.show(lhs), r.base.name(c), r.show(rhs));
                    r.fail(4, w);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(m: &PreorderedSet, xs: &[&str]) -> Vec<Elem> {
        xs.iter().map(|n| m.resolve(n).unwrap()).collect()
    }

    #[test]
    fn free_examples() {
        let m = PreorderedSet::from_names(&["0", "a", "b", "c"], &[], Some(("0", "c"))).unwrap();
        assert!(free_entailment(&m, &["a", "b"], &["a"], ArityMode::OneSided).unwrap());
        assert!(free_entailment(&m, &["0"], &["c"], ArityMode::OneSided).unwrap());
        assert!(!free_entailment(&m, &["a"], &["b"], ArityMode::OneSided).unwrap());
        assert!(free_entailment(&m, &["a"], &["b", "a"], ArityMode::TwoSided).unwrap());
        assert_eq!(
            free_entailment(&m, &["a"], &[], ArityMode::OneSided),
            Err(OrderError::EmptyRhs)
        );
        assert!(free_entailment(&m, &["q"], &["a"], ArityMode::OneSided).is_err());
    }

    #[test]
    fn free_relations_satisfy_conditions() {
        let m = Arc::new(PreorderedSet::chain(&["0", "x", "y", "1"]));
        for mode in [ArityMode::OneSided, ArityMode::TwoSided] {
            let report = check_entailment_axioms(&EntailmentRelation::free(m.clone(), mode), 4);
            assert!(report.is_clean(), "{mode:?}: {:?}", report.violations);
            assert!(report.singleton_disagreements.is_empty());
        }
    }

    #[test]
    fn always_false_violates_reflexivity() {
        let m = Arc::new(PreorderedSet::chain(&["0", "1"]));
        let rel = EntailmentRelation::custom(m, ArityMode::OneSided, |_, _, _| false);
        let report = check_entailment_axioms(&rel, 3);
        assert!(report.violates(1));
        assert_eq!(report.singleton_disagreements.len(), 3);
    }

    #[test]
    fn missing_cut_is_reported_with_triple() {
        // a |- b and a, b |- c hold, a |- c is withheld
        let m = Arc::new(PreorderedSet::from_names(&["a", "b", "c"], &[("a", "b")], None).unwrap());
        let rel = EntailmentRelation::custom(m, ArityMode::OneSided, |base, lhs, rhs| {
            let (a, b, c) = (Elem(0), Elem(1), Elem(2));
            if rhs[0] == c {
                return lhs.contains(&c) || (lhs.contains(&a) && lhs.contains(&b));
            }
            lhs.iter().any(|&x| base.leq(x, rhs[0]))
        });
        let report = check_entailment_axioms(&rel, 3);
        let cut = report
            .violations
            .iter()
            .find(|v| v.condition == 4)
            .expect("cut violation");
        assert_eq!(cut.witness, "(a; b; c)");
        assert!(!report.violates(1));
    }

    #[test]
    fn dual_relation_swaps_sides() {
        let m = Arc::new(PreorderedSet::chain(&["0", "p", "1"]));
        let rel = EntailmentRelation::free(m.clone(), ArityMode::TwoSided);
        let d = rel.dual();
        let p = names(&m, &["p"]);
        let z = names(&m, &["0"]);
        assert!(rel.entails(&z, &p));
        assert!(d.entails(&p, &z));
        assert!(!d.entails(&z, &p));
    }
}
