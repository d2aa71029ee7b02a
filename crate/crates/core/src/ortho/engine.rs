use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{EngineError, ProofError};
use crate::order::{ArityMode, Elem, EntailmentRelation, PreorderedSet};
use crate::proof::{check_derivation, Derivation, RuleTag};

use super::formula::{OrthoFormula, Sequent};

/// Proof search for the free orthocomplemented semilattice over a bounded
/// base with a one-sided entailment relation.
///
/// Every backward rule lowers the pair (total size, right side is a
/// negation) lexicographically, so the backward search space of a goal is a
/// finite acyclic graph. Both searches memoize successes and failures.
#[derive(Clone, Debug)]
pub struct OrthoEngine {
    rel: EntailmentRelation,
    zero: Elem,
    one: Elem,
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub derivable: bool,
    /// Distinct sequents visited.
    pub explored: usize,
    /// Upper bound on the sequents the goal can reach.
    pub closure_bound: u128,
    pub proof: Option<Derivation<Sequent>>,
}

/// Underivability witness: the whole backward space, every member refuted.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub explored: Vec<Sequent>,
    pub closure_bound: u128,
}

#[derive(Clone, Debug)]
pub enum DeriveOutcome {
    Proved {
        proof: Derivation<Sequent>,
        explored: usize,
    },
    Refuted(Certificate),
    Exhausted {
        explored: usize,
        budget: usize,
    },
}

impl DeriveOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, DeriveOutcome::Proved { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, DeriveOutcome::Refuted(_))
    }

    pub fn proof(&self) -> Option<&Derivation<Sequent>> {
        match self {
            DeriveOutcome::Proved { proof, .. } => Some(proof),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    /// `1 |- 0` fails in the relation.
    pub precondition_holds: bool,
    /// `1 <= 0` is underivable. Only meaningful when the precondition holds.
    pub consistent: bool,
    pub explored: usize,
}

/// The rule chosen at a proved sequent.
#[derive(Copy, Clone, Debug)]
enum Step {
    /// Focused leaf: drop every non-prime member, then close.
    Leaf,
    Prime,
    R31(usize),
    R32,
    R33,
    R34(usize),
}

type Memo = HashMap<Sequent, Option<Step>>;

struct OutOfBudget;

impl OrthoEngine {
    pub fn new(rel: EntailmentRelation) -> Result<Self, EngineError> {
        if rel.mode() != ArityMode::OneSided {
            return Err(EngineError::WrongArity {
                expected: ArityMode::OneSided.label(),
                found: rel.mode().label(),
            });
        }
        let base = rel.base();
        let (Some(zero), Some(one)) = (base.zero(), base.one()) else {
            return Err(EngineError::Unbounded);
        };
        for a in base.elements() {
            for b in base.elements() {
                let entails = rel.entails_one(&[a], b);
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
        Ok(OrthoEngine { rel, zero, one })
    }

    /// Engine over the free relation of `base`.
    pub fn free(base: Arc<PreorderedSet>) -> Result<Self, EngineError> {
        OrthoEngine::new(EntailmentRelation::free(base, ArityMode::OneSided))
    }

    pub fn base(&self) -> &PreorderedSet {
        self.rel.base()
    }

    pub fn relation(&self) -> &EntailmentRelation {
        &self.rel
    }

    pub fn zero(&self) -> OrthoFormula {
        OrthoFormula::Prime(self.zero)
    }

    pub fn one(&self) -> OrthoFormula {
        OrthoFormula::Prime(self.one)
    }

    /// Closes a sequent whose members are all prime. The empty left side
    /// is read as `1`.
    pub(crate) fn prime_holds(&self, lhs: &[OrthoFormula], rhs: Elem) -> bool {
        let mut elems: Vec<Elem> = lhs
            .iter()
            .filter_map(|f| match f {
                OrthoFormula::Prime(e) => Some(*e),
                _ => None,
            })
            .collect();
        if elems.is_empty() {
            elems.push(self.one);
        }
        self.rel.entails_one(&elems, rhs)
    }

    pub fn decide(&self, a: &OrthoFormula, b: &OrthoFormula) -> Decision {
        self.decide_sequent(&Sequent::pair(a, b))
    }

    /// Complete decision by focused search: right meets and right negations
    /// are decomposed first (both are invertible); at a prime right side the
    /// search closes with the prime members of the left side or applies
    /// negation-left to one left negation, keeping the rest.
    pub fn decide_sequent(&self, s: &Sequent) -> Decision {
        let goal = s.clone().canonical();
        let mut memo = Memo::new();
        let derivable = self.focused(&goal, &mut memo);
        let proof = derivable.then(|| self.wrap_root(s, self.rebuild(&goal, &memo)));
        Decision {
            derivable,
            explored: memo.len(),
            closure_bound: self.closure_bound(s),
            proof,
        }
    }

    fn focused(&self, s: &Sequent, memo: &mut Memo) -> bool {
        if let Some(known) = memo.get(s) {
            return known.is_some();
        }
        let step = match &s.rhs {
            OrthoFormula::Meet(b1, b2) => {
                let ok = self.focused(&Sequent { lhs: s.lhs.clone(), rhs: (**b1).clone() }, memo)
                    && self.focused(&Sequent { lhs: s.lhs.clone(), rhs: (**b2).clone() }, memo);
                ok.then_some(Step::R32)
            }
            OrthoFormula::Neg(b) => {
                let premise = self.r33_premise(s, b);
                self.focused(&premise, memo).then_some(Step::R33)
            }
            OrthoFormula::Prime(q) => {
                if self.prime_holds(&s.lhs, *q) {
                    Some(Step::Leaf)
                } else {
                    let mut found = None;
                    for i in negation_positions(&s.lhs) {
                        if self.focused(&r34_premise(s, i), memo) {
                            found = Some(Step::R34(i));
                            break;
                        }
                    }
                    found
                }
            }
        };
        memo.insert(s.clone(), step);
        step.is_some()
    }

    /// Exhaustive backward search trying every rule in the fixed order
    /// PRIME, R32, R33, R34 (left to right), R31 (left to right). `budget`
    /// caps the number of distinct sequents expanded.
    pub fn derive(&self, s: &Sequent, budget: usize) -> DeriveOutcome {
        let goal = s.clone().canonical();
        let mut memo = Memo::new();
        match self.exhaustive(&goal, &mut memo, budget) {
            Err(OutOfBudget) => DeriveOutcome::Exhausted {
                explored: memo.len(),
                budget,
            },
            Ok(true) => DeriveOutcome::Proved {
                proof: self.wrap_root(s, self.rebuild(&goal, &memo)),
                explored: memo.len(),
            },
            Ok(false) => {
                let mut explored: Vec<Sequent> = memo.into_keys().collect();
                explored.sort();
                DeriveOutcome::Refuted(Certificate {
                    explored,
                    closure_bound: self.closure_bound(s),
                })
            }
        }
    }

    fn exhaustive(&self, s: &Sequent, memo: &mut Memo, budget: usize) -> Result<bool, OutOfBudget> {
        if let Some(known) = memo.get(s) {
            return Ok(known.is_some());
        }
        if memo.len() >= budget {
            return Err(OutOfBudget);
        }
        let step = self.exhaustive_step(s, memo, budget)?;
        memo.insert(s.clone(), step);
        Ok(step.is_some())
    }

    fn exhaustive_step(&self, s: &Sequent, memo: &mut Memo, budget: usize) -> Result<Option<Step>, OutOfBudget> {
        if let OrthoFormula::Prime(q) = s.rhs {
            if s.is_prime() && self.prime_holds(&s.lhs, q) {
                return Ok(Some(Step::Prime));
            }
        }
        match &s.rhs {
            OrthoFormula::Meet(b1, b2) => {
                if self.exhaustive(&Sequent { lhs: s.lhs.clone(), rhs: (**b1).clone() }, memo, budget)?
                    && self.exhaustive(&Sequent { lhs: s.lhs.clone(), rhs: (**b2).clone() }, memo, budget)?
                {
                    return Ok(Some(Step::R32));
                }
            }
            OrthoFormula::Neg(b) => {
                if self.exhaustive(&self.r33_premise(s, b), memo, budget)? {
                    return Ok(Some(Step::R33));
                }
            }
            OrthoFormula::Prime(_) => {}
        }
        for i in negation_positions(&s.lhs) {
            if self.exhaustive(&r34_premise(s, i), memo, budget)? {
                return Ok(Some(Step::R34(i)));
            }
        }
        for i in distinct_positions(&s.lhs) {
            let premise = Sequent {
                lhs: s.without(i),
                rhs: s.rhs.clone(),
            };
            if self.exhaustive(&premise, memo, budget)? {
                return Ok(Some(Step::R31(i)));
            }
        }
        Ok(None)
    }

    fn r33_premise(&self, s: &Sequent, b: &OrthoFormula) -> Sequent {
        let mut lhs = s.lhs.clone();
        lhs.extend(b.conjuncts());
        Sequent { lhs, rhs: self.zero() }.canonical()
    }

    /// Derivation of a proved canonical sequent from the memo table.
    fn rebuild(&self, s: &Sequent, memo: &Memo) -> Derivation<Sequent> {
        let step = memo
            .get(s)
            .copied()
            .flatten()
            .expect("rebuild is only called on proved sequents");
        match step {
            Step::Leaf => leaf_chain(s.clone()),
            Step::Prime => Derivation::leaf(s.clone(), RuleTag::Prime),
            Step::R31(i) => {
                let premise = Sequent {
                    lhs: s.without(i),
                    rhs: s.rhs.clone(),
                };
                Derivation::node(s.clone(), RuleTag::R31, vec![i], vec![self.rebuild(&premise, memo)])
            }
            Step::R32 => {
                let OrthoFormula::Meet(b1, b2) = &s.rhs else { unreachable!() };
                let p1 = Sequent { lhs: s.lhs.clone(), rhs: (**b1).clone() };
                let p2 = Sequent { lhs: s.lhs.clone(), rhs: (**b2).clone() };
                Derivation::node(
                    s.clone(),
                    RuleTag::R32,
                    vec![],
                    vec![self.rebuild(&p1, memo), self.rebuild(&p2, memo)],
                )
            }
            Step::R33 => {
                let OrthoFormula::Neg(b) = &s.rhs else { unreachable!() };
                let premise = self.r33_premise(s, b);
                Derivation::node(s.clone(), RuleTag::R33, vec![], vec![self.rebuild(&premise, memo)])
            }
            Step::R34(i) => {
                let premise = r34_premise(s, i);
                Derivation::node(s.clone(), RuleTag::R34, vec![i], vec![self.rebuild(&premise, memo)])
            }
        }
    }

    /// Puts a rearrangement step above the canonical proof when the goal was
    /// given in another order.
    fn wrap_root(&self, goal: &Sequent, proof: Derivation<Sequent>) -> Derivation<Sequent> {
        if goal.is_canonical() {
            proof
        } else {
            Derivation::node(goal.clone(), RuleTag::Struct, vec![], vec![proof])
        }
    }

    /// Bound on the sequents reachable backward from `s`: left sides are
    /// multisets of non-meet subformulas whose total size is at most the
    /// weight of `s`, right sides are subformulas or `0`.
    pub fn closure_bound(&self, s: &Sequent) -> u128 {
        let mut subs: BTreeSet<OrthoFormula> = BTreeSet::new();
        for f in s.lhs.iter().chain(std::iter::once(&s.rhs)) {
            subs.extend(f.subformulas());
        }
        let limit = s.weight();
        let mut ways = vec![0u128; limit + 1];
        ways[0] = 1;
        for f in subs.iter().filter(|f| !matches!(f, OrthoFormula::Meet(..))) {
            let k = f.size();
            for w in k..=limit {
                ways[w] = ways[w].saturating_add(ways[w - k]);
            }
        }
        let lhs_count = ways.iter().fold(0u128, |acc, &x| acc.saturating_add(x));
        subs.insert(self.zero());
        lhs_count.saturating_mul(subs.len() as u128)
    }

    /// Checks a derivation against the rules of this engine.
    pub fn check(&self, d: &Derivation<Sequent>) -> Result<(), ProofError> {
        check_derivation(self, d)
    }

    /// `1 <= 0` must be underivable whenever `1 |- 0` fails in the relation.
    pub fn consistency_check(&self) -> ConsistencyReport {
        if self.rel.entails_one(&[self.one], self.zero) {
            return ConsistencyReport {
                precondition_holds: false,
                consistent: false,
                explored: 0,
            };
        }
        let d = self.decide(&self.one(), &self.zero());
        ConsistencyReport {
            precondition_holds: true,
            consistent: !d.derivable,
            explored: d.explored,
        }
    }
}

/// Positions of left negations, skipping repeats of an equal member.
fn negation_positions(lhs: &[OrthoFormula]) -> Vec<usize> {
    distinct_positions(lhs)
        .into_iter()
        .filter(|&i| matches!(lhs[i], OrthoFormula::Neg(_)))
        .collect()
}

fn distinct_positions(lhs: &[OrthoFormula]) -> Vec<usize> {
    (0..lhs.len())
        .filter(|&i| !lhs[..i].contains(&lhs[i]))
        .collect()
}

fn r34_premise(s: &Sequent, i: usize) -> Sequent {
    let OrthoFormula::Neg(c) = &s.lhs[i] else {
        unreachable!("negation position")
    };
    Sequent {
        lhs: s.without(i),
        rhs: (**c).clone(),
    }
}

/// R31 steps removing each non-prime member, then PRIME.
fn leaf_chain(s: Sequent) -> Derivation<Sequent> {
    match s.lhs.iter().position(|f| !f.is_prime()) {
        None => Derivation::leaf(s, RuleTag::Prime),
        Some(i) => {
            let premise = Sequent {
                lhs: s.without(i),
                rhs: s.rhs.clone(),
            };
            Derivation::node(s, RuleTag::R31, vec![i], vec![leaf_chain(premise)])
        }
    }
}
