use crate::proof::{expect_arity, expect_side, Calculus, Derivation, NodeFault, RuleTag};

use super::engine::OrthoEngine;
use super::formula::{OrthoFormula, Sequent};

fn same_multiset(a: &[OrthoFormula], b: &[OrthoFormula]) -> bool {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort();
    y.sort();
    x == y
}

fn reject(msg: impl Into<String>) -> Result<(), NodeFault> {
    Err(NodeFault::Rejected(msg.into()))
}

fn flat(lhs: &[OrthoFormula]) -> bool {
    lhs.iter().all(|f| !matches!(f, OrthoFormula::Meet(..)))
}

impl Calculus for OrthoEngine {
    type Sequent = Sequent;

    fn check_node(&self, node: &Derivation<Sequent>) -> Result<(), NodeFault> {
        let s = &node.conclusion;
        if !node.rule.is_ortho() {
            return Err(NodeFault::Malformed(format!("{} is not an ortho rule", node.rule)));
        }
        if !flat(&s.lhs) || node.premises.iter().any(|p| !flat(&p.conclusion.lhs)) {
            return Err(NodeFault::Malformed("left side holds an unflattened meet".into()));
        }
        let arity = match node.rule {
            RuleTag::Prime => 0,
            RuleTag::R32 => 2,
            _ => 1,
        };
        expect_arity(node, arity)?;
        let sides = match node.rule {
            RuleTag::R31 | RuleTag::R34 => 1,
            _ => 0,
        };
        expect_side(node, sides)?;
        let premise = |k: usize| &node.premises[k].conclusion;
        match node.rule {
            RuleTag::Prime => {
                let OrthoFormula::Prime(q) = s.rhs else {
                    return reject("PRIME needs a prime right side");
                };
                if !s.is_prime() {
                    return reject("PRIME needs prime left members");
                }
                if !self.prime_holds(&s.lhs, q) {
                    return reject("relation does not hold");
                }
                Ok(())
            }
            RuleTag::Struct => {
                let p = premise(0);
                if p.rhs != s.rhs || !same_multiset(&p.lhs, &s.lhs) {
                    return reject("premise is not a rearrangement of the conclusion");
                }
                Ok(())
            }
            RuleTag::R31 => {
                let i = node.side[0];
                if i >= s.lhs.len() {
                    return Err(NodeFault::Malformed(format!("position {i} out of range")));
                }
                let p = premise(0);
                if p.rhs != s.rhs || !same_multiset(&p.lhs, &s.without(i)) {
                    return reject("premise is not the conclusion without the weakened member");
                }
                Ok(())
            }
            RuleTag::R32 => {
                let OrthoFormula::Meet(b1, b2) = &s.rhs else {
                    return reject("R32 needs a meet on the right");
                };
                for (k, b) in [(0, b1), (1, b2)] {
                    let p = premise(k);
                    if p.rhs != **b || !same_multiset(&p.lhs, &s.lhs) {
                        return reject(format!("premise {k} does not match"));
                    }
                }
                Ok(())
            }
            RuleTag::R33 => {
                let OrthoFormula::Neg(b) = &s.rhs else {
                    return reject("R33 needs a negation on the right");
                };
                let p = premise(0);
                let mut lhs = s.lhs.clone();
                lhs.extend(b.conjuncts());
                if p.rhs != self.zero() || !same_multiset(&p.lhs, &lhs) {
                    return reject("premise must add the negated formula on the left with 0 on the right");
                }
                Ok(())
            }
            RuleTag::R34 => {
                let i = node.side[0];
                let Some(OrthoFormula::Neg(b)) = s.lhs.get(i) else {
                    return reject(format!("left member {i} is not a negation"));
                };
                let p = premise(0);
                if p.rhs != **b || !same_multiset(&p.lhs, &s.without(i)) {
                    return reject("premise must drop the negation and prove its argument");
                }
                Ok(())
            }
            _ => unreachable!("ortho tags only"),
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::order::PreorderedSet;
    use crate::proof::check_derivation;
    use crate::ProofError;

    fn engine() -> OrthoEngine {
        OrthoEngine::free(Arc::new(PreorderedSet::bounded_antichain(&["a", "b"]))).unwrap()
    }

    fn seq(e: &OrthoEngine, text: &str) -> Sequent {
        Sequent::parse(e.base(), text).unwrap()
    }

    #[test]
    fn single_prime_node() {
        let e = engine();
        assert!(check_derivation(&e, &Derivation::leaf(seq(&e, "a |- a"), RuleTag::Prime)).is_ok());
        assert!(check_derivation(&e, &Derivation::leaf(seq(&e, "|- 1"), RuleTag::Prime)).is_ok());
        assert!(matches!(
            check_derivation(&e, &Derivation::leaf(seq(&e, "a |- b"), RuleTag::Prime)),
            Err(ProofError::Rejected { .. })
        ));
    }

    #[test]
    fn arity_is_malformed_not_rejected() {
        let e = engine();
        let d = Derivation::node(
            seq(&e, "a |- a ^ a"),
            RuleTag::R32,
            vec![],
            vec![Derivation::leaf(seq(&e, "a |- a"), RuleTag::Prime)],
        );
        assert!(matches!(check_derivation(&e, &d), Err(ProofError::Malformed { path, .. }) if path == "root"));
    }

    #[test]
    fn negation_rules() {
        let e = engine();
        let good = Derivation::node(
            seq(&e, "a |- ~~a"),
            RuleTag::R33,
            vec![],
            vec![Derivation::node(
                seq(&e, "a ^ ~a |- 0"),
                RuleTag::R34,
                vec![1],
                vec![Derivation::leaf(seq(&e, "a |- a"), RuleTag::Prime)],
            )],
        );
        assert!(check_derivation(&e, &good).is_ok());
        let mut bad = good.clone();
        bad.get_mut(&[0]).unwrap().side = vec![0];
        assert!(matches!(check_derivation(&e, &bad), Err(ProofError::Rejected { path, .. }) if path == "0"));
    }

    #[test]
    fn contraction_is_not_structural() {
        let e = engine();
        let d = Derivation::node(
            seq(&e, "a ^ a |- a"),
            RuleTag::Struct,
            vec![],
            vec![Derivation::leaf(seq(&e, "a |- a"), RuleTag::Prime)],
        );
        assert!(check_derivation(&e, &d).is_err());
    }
}
