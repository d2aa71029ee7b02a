use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{EngineError, ProofError};
use crate::order::{ArityMode, EntailmentRelation, PreorderedSet};
use crate::proof::{check_derivation, Derivation, RuleTag};

use super::check::{rule_premises, CcCalculus};
use super::formula::{CcFormula, CcSequent, Side};
use super::CcOptions;

/// Backward search for the boolean calculus over finite sets `N`.
///
/// Weakening is used directly above PRIME leaves, where a leaf deletes every
/// non-prime member and closes with the relation, which is monotone.
///
/// Without contraction every rule lowers the total size, so the space of a
/// goal is a finite acyclic graph, searched with backtracking and memoized.
///
/// With contraction, `G, f, f |- D` and `G, f |- D` are interderivable, so
/// sequents are kept duplicate-free (the weakening steps removing copies
/// appear in the proof) and every rule keeps its principal formula: a
/// contraction, then the rule on one copy. Each premise then contains its
/// conclusion, so by weakening every step is invertible and no choice needs
/// to be undone. A step whose premises all differ from the conclusion adds
/// a subformula of the goal, so branches are finite. When no such step
/// remains the sequent is saturated and derivable exactly when PRIME holds:
/// in any derivation of a sequent whose members all occur in it, every rule
/// has a premise whose members also all occur in it.
#[derive(Clone, Debug)]
pub struct CcEngine {
    rel: EntailmentRelation,
}

#[derive(Clone, Debug)]
pub enum CcOutcome {
    Proved {
        proof: Derivation<CcSequent>,
        explored: usize,
    },
    /// Underivable: every sequent reachable from the goal was explored.
    Refuted { explored: Vec<CcSequent> },
    Exhausted { explored: usize, budget: usize },
}

impl CcOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, CcOutcome::Proved { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, CcOutcome::Refuted { .. })
    }

    /// `Some(derivable)` unless the budget ran out.
    pub fn verdict(&self) -> Option<bool> {
        match self {
            CcOutcome::Proved { .. } => Some(true),
            CcOutcome::Refuted { .. } => Some(false),
            CcOutcome::Exhausted { .. } => None,
        }
    }

    pub fn explored(&self) -> usize {
        match self {
            CcOutcome::Proved { explored, .. } | CcOutcome::Exhausted { explored, .. } => *explored,
            CcOutcome::Refuted { explored } => explored.len(),
        }
    }

    pub fn proof(&self) -> Option<&Derivation<CcSequent>> {
        match self {
            CcOutcome::Proved { proof, .. } => Some(proof),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
struct Step {
    rule: RuleTag,
    side: Vec<usize>,
    /// Contract the principal formula first and apply the rule to one copy.
    keep: bool,
}

struct Search<'a> {
    calculus: &'a CcCalculus,
    /// The step that proves a sequent, or `None`.
    memo: HashMap<CcSequent, Option<Step>>,
    visits: usize,
    budget: usize,
}

struct OutOfBudget;

impl CcEngine {
    pub fn new(rel: EntailmentRelation) -> Result<Self, EngineError> {
        if rel.mode() != ArityMode::TwoSided {
            return Err(EngineError::WrongArity {
                expected: ArityMode::TwoSided.label(),
                found: rel.mode().label(),
            });
        }
        let base = rel.base();
        if !base.is_bounded() {
            return Err(EngineError::Unbounded);
        }
        for a in base.elements() {
            for b in base.elements() {
                let entails = rel.entails(&[a], &[b]);
                let leq = base.leq(a, b);
                if entails != leq {
                    return Err(EngineError::SingletonMismatch {
                        lhs: base.name(a).to_string(),
                        rhs: base.name(b).to_string(),
                        entails,
                        leq,
                    });
                }
            }
        }
        Ok(CcEngine { rel })
    }

    pub fn free(base: Arc<PreorderedSet>) -> Result<Self, EngineError> {
        CcEngine::new(EntailmentRelation::free(base, ArityMode::TwoSided))
    }

    pub fn base(&self) -> &PreorderedSet {
        self.rel.base()
    }

    pub fn relation(&self) -> &EntailmentRelation {
        &self.rel
    }

    /// The rule set matching `options`, for checking derivations.
    pub fn calculus(&self, options: &CcOptions) -> CcCalculus {
        CcCalculus {
            rel: self.rel.clone(),
            options: options.clone(),
        }
    }

    pub fn check(&self, d: &Derivation<CcSequent>, options: &CcOptions) -> Result<(), ProofError> {
        check_derivation(&self.calculus(options), d)
    }

    /// The engine over the dual base and relation.
    pub fn dual(&self) -> CcEngine {
        CcEngine {
            rel: self.rel.dual(),
        }
    }

    pub fn decide(&self, s: &CcSequent, options: &CcOptions) -> Option<bool> {
        self.derive(s, options).verdict()
    }

    pub fn derive(&self, s: &CcSequent, options: &CcOptions) -> CcOutcome {
        let calculus = self.calculus(options);
        let mut search = Search {
            calculus: &calculus,
            memo: HashMap::new(),
            visits: 0,
            budget: options.budget,
        };
        let raw = s.clone().canonical();
        let goal = search.normalize(raw.clone());
        match search.prove(&goal) {
            Err(OutOfBudget) => CcOutcome::Exhausted {
                explored: search.visits,
                budget: options.budget,
            },
            Ok(true) => {
                let proof = search.dedupe_chain(raw, search.rebuild(&goal));
                let proof = if s.is_canonical() {
                    proof
                } else {
                    Derivation::node(s.clone(), RuleTag::Struct, vec![], vec![proof])
                };
                CcOutcome::Proved {
                    proof,
                    explored: search.visits,
                }
            }
            Ok(false) => {
                let mut explored: Vec<CcSequent> = search.memo.into_keys().collect();
                explored.sort();
                CcOutcome::Refuted { explored }
            }
        }
    }
}

fn distinct(items: &[CcFormula]) -> impl Iterator<Item = usize> + '_ {
    (0..items.len()).filter(move |&i| !items[..i].contains(&items[i]))
}

/// Nonempty subsets of `0..n` as ascending index lists.
fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u64..(1 << n)).map(move |mask| (0..n).filter(|j| mask >> j & 1 == 1).collect())
}

impl Search<'_> {
    fn contraction(&self) -> bool {
        self.calculus.options.contraction
    }

    /// Canonical order, and duplicate-free when contraction is on.
    fn normalize(&self, s: CcSequent) -> CcSequent {
        let mut s = s.canonical();
        if self.contraction() {
            s.lhs.dedup();
            s.rhs.dedup();
        }
        s
    }

    /// Rule instances to try at `s`: every left member, then every right
    /// member.
    fn candidates(&self, s: &CcSequent) -> Vec<Step> {
        let multi = self.calculus.options.multi_premise_variant;
        let keep = self.contraction();
        let mut out: Vec<Step> = Vec::new();
        let mut push = |rule, side| out.push(Step { rule, side, keep });
        for i in distinct(&s.lhs) {
            match &s.lhs[i] {
                CcFormula::Prime(_) | CcFormula::And(..) | CcFormula::Forall(_) => {}
                CcFormula::Or(..) => push(RuleTag::CcJoinLeft, vec![i]),
                CcFormula::Neg(_) => push(RuleTag::CcNegLeft, vec![i]),
                CcFormula::Exists(_) => push(RuleTag::CcExistsLeft, vec![i]),
            }
        }
        for i in distinct(&s.rhs) {
            match &s.rhs[i] {
                CcFormula::Prime(_) | CcFormula::Or(..) | CcFormula::Exists(_) => {}
                CcFormula::And(..) => push(RuleTag::CcMeetRight, vec![i]),
                CcFormula::Neg(_) => push(RuleTag::CcNegRight, vec![i]),
                CcFormula::Forall(_) => push(RuleTag::CcForallRight, vec![i]),
            }
        }
        let witnesses = |i: usize, n: usize, single: RuleTag, several: RuleTag| -> Vec<Step> {
            if multi {
                subsets(n)
                    .map(|picks| {
                        let mut side = vec![i];
                        side.extend(picks);
                        Step { rule: several, side, keep }
                    })
                    .collect()
            } else {
                (0..n)
                    .map(|j| Step {
                        rule: single,
                        side: vec![i, j],
                        keep,
                    })
                    .collect()
            }
        };
        for i in distinct(&s.lhs) {
            if let CcFormula::Forall(n) = &s.lhs[i] {
                out.extend(witnesses(i, n.len(), RuleTag::CcForallLeft, RuleTag::CcForallLeftMulti));
            }
        }
        for i in distinct(&s.rhs) {
            if let CcFormula::Exists(n) = &s.rhs[i] {
                out.extend(witnesses(i, n.len(), RuleTag::CcExistsRight, RuleTag::CcExistsRightMulti));
            }
        }
        out
    }

    /// The sequent a keep step applies its rule to.
    fn contracted(s: &CcSequent, step: &Step) -> CcSequent {
        let side = principal_side(step.rule);
        let i = step.side[0];
        let mut p = s.clone();
        let f = p.side(side)[i].clone();
        p.side_mut(side).insert(i, f);
        p
    }

    /// Premises of `step` at `s`, canonical but not yet deduplicated.
    fn raw_premises(&self, s: &CcSequent, step: &Step) -> Vec<CcSequent> {
        let at = if step.keep {
            Self::contracted(s, step)
        } else {
            s.clone()
        };
        rule_premises(self.calculus.base(), &at, step.rule, &step.side)
            .expect("search only builds well-formed instances")
            .into_iter()
            .map(CcSequent::canonical)
            .collect()
    }

    fn prove(&mut self, s: &CcSequent) -> Result<bool, OutOfBudget> {
        if let Some(known) = self.memo.get(s) {
            return Ok(known.is_some());
        }
        if self.visits >= self.budget {
            return Err(OutOfBudget);
        }
        self.visits += 1;
        let found = if self.calculus.prime_holds(s) {
            Some(Step {
                rule: RuleTag::CcPrime,
                side: Vec::new(),
                keep: false,
            })
        } else if self.contraction() {
            self.saturate(s)?
        } else {
            self.backtrack(s)?
        };
        let ok = found.is_some();
        self.memo.insert(s.clone(), found);
        Ok(ok)
    }

    fn backtrack(&mut self, s: &CcSequent) -> Result<Option<Step>, OutOfBudget> {
        'steps: for step in self.candidates(s) {
            for p in self.raw_premises(s, &step) {
                if !self.prove(&p)? {
                    continue 'steps;
                }
            }
            return Ok(Some(step));
        }
        Ok(None)
    }

    /// The first step that adds something decides `s`.
    fn saturate(&mut self, s: &CcSequent) -> Result<Option<Step>, OutOfBudget> {
        for step in self.candidates(s) {
            let premises: Vec<CcSequent> = self
                .raw_premises(s, &step)
                .into_iter()
                .map(|p| self.normalize(p))
                .collect();
            if premises.contains(s) {
                continue;
            }
            for p in &premises {
                if !self.prove(p)? {
                    return Ok(None);
                }
            }
            return Ok(Some(step));
        }
        Ok(None)
    }

    /// Weakening steps removing repeated members of the canonical `raw`
    /// until it is the conclusion of `proof`; only used with contraction.
    fn dedupe_chain(&self, raw: CcSequent, proof: Derivation<CcSequent>) -> Derivation<CcSequent> {
        if !self.contraction() {
            return proof;
        }
        if let Some(i) = (1..raw.lhs.len()).find(|&i| raw.lhs[i] == raw.lhs[i - 1]) {
            let mut p = raw.clone();
            p.lhs.remove(i);
            let rest = self.dedupe_chain(p, proof);
            return Derivation::node(raw, RuleTag::CcWeakenLeft, vec![i], vec![rest]);
        }
        if let Some(i) = (1..raw.rhs.len()).find(|&i| raw.rhs[i] == raw.rhs[i - 1]) {
            let mut p = raw.clone();
            p.rhs.remove(i);
            let rest = self.dedupe_chain(p, proof);
            return Derivation::node(raw, RuleTag::CcWeakenRight, vec![i], vec![rest]);
        }
        proof
    }

    fn rebuild(&self, s: &CcSequent) -> Derivation<CcSequent> {
        let step = self
            .memo
            .get(s)
            .cloned()
            .flatten()
            .expect("rebuild is only called on proved sequents");
        if step.rule == RuleTag::CcPrime {
            return leaf_chain(s.clone());
        }
        let premises = self
            .raw_premises(s, &step)
            .into_iter()
            .map(|raw| {
                let p = self.normalize(raw.clone());
                self.dedupe_chain(raw, self.rebuild(&p))
            })
            .collect();
        if step.keep {
            let contracted = Self::contracted(s, &step);
            let code = match principal_side(step.rule) {
                Side::Left => 0,
                Side::Right => 1,
            };
            let inner = Derivation::node(contracted, step.rule, step.side.clone(), premises);
            Derivation::node(s.clone(), RuleTag::CcContract, vec![code, step.side[0]], vec![inner])
        } else {
            Derivation::node(s.clone(), step.rule, step.side, premises)
        }
    }
}

fn principal_side(rule: RuleTag) -> Side {
    match rule {
        RuleTag::CcJoinLeft
        | RuleTag::CcNegLeft
        | RuleTag::CcExistsLeft
        | RuleTag::CcForallLeft
        | RuleTag::CcForallLeftMulti => Side::Left,
        _ => Side::Right,
    }
}

/// Weakening steps removing every non-prime member, then C-PRIME.
fn leaf_chain(s: CcSequent) -> Derivation<CcSequent> {
    if let Some(i) = s.lhs.iter().position(|f| !f.is_prime()) {
        let mut p = s.clone();
        p.lhs.remove(i);
        return Derivation::node(s, RuleTag::CcWeakenLeft, vec![i], vec![leaf_chain(p)]);
    }
    if let Some(i) = s.rhs.iter().position(|f| !f.is_prime()) {
        let mut p = s.clone();
        p.rhs.remove(i);
        return Derivation::node(s, RuleTag::CcWeakenRight, vec![i], vec![leaf_chain(p)]);
    }
    Derivation::leaf(s, RuleTag::CcPrime)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine() -> CcEngine {
        CcEngine::free(Arc::new(PreorderedSet::chain(&["0", "1/3", "1/2", "1"]))).unwrap()
    }

    fn seq(e: &CcEngine, text: &str) -> CcSequent {
        CcSequent::parse(e.base(), text).unwrap()
    }

    fn off() -> CcOptions {
        CcOptions {
            contraction: false,
            ..CcOptions::default()
        }
    }

    #[test]
    fn omega_rule_on_the_right() {
        let e = engine();
        let s = seq(&e, "1/2 |- A{1, 1/2}");
        let out = e.derive(&s, &off());
        let proof = out.proof().expect("derivable");
        assert_eq!(proof.rule, RuleTag::CcForallRight);
        assert_eq!(proof.premises.len(), 2);
        e.check(proof, &off()).unwrap();
        assert_eq!(e.decide(&seq(&e, "1/3 |- A{1, 1/2}"), &off()), Some(true));
        assert_eq!(e.decide(&seq(&e, "1/2 |- A{1/3, 1}"), &off()), Some(false));
    }

    #[test]
    fn unit_conventions() {
        let e = engine();
        let s = seq(&e, "1/2 |- 0 v 1/2");
        assert_eq!(s.rhs.len(), 1);
        assert_eq!(e.decide(&s, &off()), Some(true));
        assert_eq!(e.decide(&seq(&e, "|- 1"), &off()), Some(true));
        assert_eq!(e.decide(&seq(&e, "0 |-"), &off()), Some(true));
        assert_eq!(e.decide(&seq(&e, "|-"), &off()), Some(false));
    }

    #[test]
    fn classical_laws() {
        let e = engine();
        let on = CcOptions::default();
        for text in [
            "|- 1/2 v ~1/2",
            "1/2 ^ ~1/2 |-",
            "~~1/2 |- 1/2",
            "~(1/2 ^ 1/3) |- ~1/2 v ~1/3",
            "1/2 ^ (1/3 v 1) |- 1/2 ^ 1/3 v 1/2 ^ 1",
            "~A{1/2, 1/3} |- E{~1/2, ~1/3}",
        ] {
            let out = e.derive(&seq(&e, text), &on);
            let proof = out.proof().unwrap_or_else(|| panic!("{text}"));
            e.check(proof, &on).unwrap();
        }
        assert_eq!(e.decide(&seq(&e, "1/2 |- 1/3"), &on), Some(false));
    }

    #[test]
    fn budget_is_reported() {
        let e = engine();
        let s = seq(&e, "A{1, 1/2, ~A{1, 1/2}} |-");
        let tight = CcOptions {
            budget: 2,
            ..CcOptions::default()
        };
        assert!(matches!(e.derive(&s, &tight), CcOutcome::Exhausted { budget: 2, .. }));
    }

    #[test]
    fn preconditions() {
        let base = Arc::new(PreorderedSet::chain(&["0", "1"]));
        let one_sided = EntailmentRelation::free(Arc::clone(&base), ArityMode::OneSided);
        assert!(matches!(CcEngine::new(one_sided), Err(EngineError::WrongArity { .. })));
        let unbounded = PreorderedSet::from_names(&["a"], &[], None).unwrap();
        assert!(matches!(CcEngine::free(Arc::new(unbounded)), Err(EngineError::Unbounded)));
    }
}
