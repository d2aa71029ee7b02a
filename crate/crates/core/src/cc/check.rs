use crate::order::{Elem, EntailmentRelation, PreorderedSet};
use crate::proof::{expect_arity, Calculus, Derivation, NodeFault, RuleTag};

use super::formula::{CcFormula, CcSequent, Side};
use super::CcOptions;

/// The rule set of the boolean calculus under a fixed choice of options.
#[derive(Clone, Debug)]
pub struct CcCalculus {
    pub(crate) rel: EntailmentRelation,
    pub(crate) options: CcOptions,
}

fn malformed(msg: impl Into<String>) -> NodeFault {
    NodeFault::Malformed(msg.into())
}

fn rejected(msg: impl Into<String>) -> NodeFault {
    NodeFault::Rejected(msg.into())
}

fn member(s: &CcSequent, side: Side, i: usize) -> Result<&CcFormula, NodeFault> {
    s.side(side)
        .get(i)
        .ok_or_else(|| malformed(format!("position {i} out of range")))
}

/// `s` with member `i` of `side` replaced by `with`, renormalized.
fn replace(base: &PreorderedSet, s: &CcSequent, side: Side, i: usize, with: &[CcFormula]) -> CcSequent {
    let mut out = s.clone();
    out.side_mut(side).remove(i);
    for f in with {
        out.push(base, side, f.clone());
    }
    out
}

fn set_members(n: &[CcFormula], picks: &[usize]) -> Result<Vec<CcFormula>, NodeFault> {
    if picks.is_empty() {
        return Err(malformed("at least one member must be chosen"));
    }
    picks
        .iter()
        .map(|&j| {
            n.get(j)
                .cloned()
                .ok_or_else(|| malformed(format!("member {j} out of range")))
        })
        .collect()
}

/// Premises a rule instance demands, in order. Side data layouts:
///
/// - C-CONTRACT: `[side, i]`, side 0 = left, 1 = right; the premise has one more copy;
/// - C-WEAK-R, C-MEET-R, C-NEG-R, C-ALL-R: `[i]` on the right;
/// - C-WEAK-L, C-JOIN-L, C-NEG-L, C-EX-L: `[i]` on the left;
/// - C-ALL-L: `[i, j]` left, member `j`; C-EX-R: `[i, j]` right, member `j`;
/// - C-ALL-L-MULTI, C-EX-R-MULTI: `[i, j1, ..., jn]`.
pub(crate) fn rule_premises(
    base: &PreorderedSet,
    s: &CcSequent,
    rule: RuleTag,
    side: &[usize],
) -> Result<Vec<CcSequent>, NodeFault> {
    let want = |n: usize| {
        if side.len() == n {
            Ok(())
        } else {
            Err(malformed(format!("{rule} takes {n} side value(s), found {}", side.len())))
        }
    };
    use RuleTag::*;
    match rule {
        CcContract => {
            want(2)?;
            let which = match side[0] {
                0 => Side::Left,
                1 => Side::Right,
                _ => return Err(malformed("side must be 0 or 1")),
            };
            let f = member(s, which, side[1])?.clone();
            let mut p = s.clone();
            p.side_mut(which).insert(side[1], f);
            Ok(vec![p])
        }
        CcWeakenRight => {
            want(1)?;
            member(s, Side::Right, side[0])?;
            Ok(vec![replace(base, s, Side::Right, side[0], &[])])
        }
        CcWeakenLeft => {
            want(1)?;
            member(s, Side::Left, side[0])?;
            Ok(vec![replace(base, s, Side::Left, side[0], &[])])
        }
        CcJoinLeft => {
            want(1)?;
            let CcFormula::Or(a1, a2) = member(s, Side::Left, side[0])? else {
                return Err(rejected("C-JOIN-L needs a join on the left"));
            };
            Ok(vec![
                replace(base, s, Side::Left, side[0], &[(**a1).clone()]),
                replace(base, s, Side::Left, side[0], &[(**a2).clone()]),
            ])
        }
        CcMeetRight => {
            want(1)?;
            let CcFormula::And(b1, b2) = member(s, Side::Right, side[0])? else {
                return Err(rejected("C-MEET-R needs a meet on the right"));
            };
            Ok(vec![
                replace(base, s, Side::Right, side[0], &[(**b1).clone()]),
                replace(base, s, Side::Right, side[0], &[(**b2).clone()]),
            ])
        }
        CcNegLeft => {
            want(1)?;
            let CcFormula::Neg(c) = member(s, Side::Left, side[0])? else {
                return Err(rejected("C-NEG-L needs a negation on the left"));
            };
            let mut p = replace(base, s, Side::Left, side[0], &[]);
            p.push(base, Side::Right, (**c).clone());
            Ok(vec![p])
        }
        CcNegRight => {
            want(1)?;
            let CcFormula::Neg(c) = member(s, Side::Right, side[0])? else {
                return Err(rejected("C-NEG-R needs a negation on the right"));
            };
            let mut p = replace(base, s, Side::Right, side[0], &[]);
            p.push(base, Side::Left, (**c).clone());
            Ok(vec![p])
        }
        CcForallLeft | CcForallLeftMulti => {
            if rule == CcForallLeft {
                want(2)?;
            }
            let CcFormula::Forall(n) = member(s, Side::Left, *side.first().ok_or_else(|| malformed("missing position"))?)? else {
                return Err(rejected(format!("{rule} needs a meet of a set on the left")));
            };
            let picks = set_members(n, &side[1..])?;
            Ok(vec![replace(base, s, Side::Left, side[0], &picks)])
        }
        CcExistsRight | CcExistsRightMulti => {
            if rule == CcExistsRight {
                want(2)?;
            }
            let CcFormula::Exists(n) = member(s, Side::Right, *side.first().ok_or_else(|| malformed("missing position"))?)? else {
                return Err(rejected(format!("{rule} needs a join of a set on the right")));
            };
            let picks = set_members(n, &side[1..])?;
            Ok(vec![replace(base, s, Side::Right, side[0], &picks)])
        }
        CcExistsLeft => {
            want(1)?;
            let CcFormula::Exists(n) = member(s, Side::Left, side[0])? else {
                return Err(rejected("C-EX-L needs a join of a set on the left"));
            };
            Ok(n.iter().map(|x| replace(base, s, Side::Left, side[0], std::slice::from_ref(x))).collect())
        }
        CcForallRight => {
            want(1)?;
            let CcFormula::Forall(n) = member(s, Side::Right, side[0])? else {
                return Err(rejected("C-ALL-R needs a meet of a set on the right"));
            };
            Ok(n.iter().map(|x| replace(base, s, Side::Right, side[0], std::slice::from_ref(x))).collect())
        }
        other => Err(malformed(format!("{other} has no premise schema"))),
    }
}

impl CcCalculus {
    pub fn base(&self) -> &PreorderedSet {
        self.rel.base()
    }

    pub fn options(&self) -> &CcOptions {
        &self.options
    }

    /// PRIME: every member prime and the relation holds, with `1` standing
    /// in for an empty left side and `0` for an empty right side.
    pub(crate) fn prime_holds(&self, s: &CcSequent) -> bool {
        let base = self.base();
        let elems = |items: &[CcFormula], unit: Option<Elem>| -> Vec<Elem> {
            let mut out: Vec<Elem> = items
                .iter()
                .filter_map(|f| match f {
                    CcFormula::Prime(e) => Some(*e),
                    _ => None,
                })
                .collect();
            if out.is_empty() {
                out.extend(unit);
            }
            out
        };
        self.rel
            .entails(&elems(&s.lhs, base.one()), &elems(&s.rhs, base.zero()))
    }
}

impl Calculus for CcCalculus {
    type Sequent = CcSequent;

    fn check_node(&self, node: &Derivation<CcSequent>) -> Result<(), NodeFault> {
        let s = &node.conclusion;
        let base = self.base();
        if node.rule.is_ortho() && node.rule != RuleTag::Struct {
            return Err(malformed(format!("{} is not a rule of this calculus", node.rule)));
        }
        match node.rule {
            RuleTag::CcPrime => {
                expect_arity(node, 0)?;
                if !node.side.is_empty() {
                    return Err(malformed("C-PRIME takes no side values"));
                }
                if !s.is_prime() {
                    return Err(rejected("C-PRIME needs prime members only"));
                }
                if !self.prime_holds(s) {
                    return Err(rejected("relation does not hold"));
                }
                return Ok(());
            }
            RuleTag::Struct => {
                expect_arity(node, 1)?;
                if !node.side.is_empty() {
                    return Err(malformed("STRUCT takes no side values"));
                }
                if !node.premises[0].conclusion.same_multisets(s) {
                    return Err(rejected("premise is not a rearrangement of the conclusion"));
                }
                return Ok(());
            }
            RuleTag::CcContract if !self.options.contraction => {
                return Err(rejected("contraction is disabled"));
            }
            RuleTag::CcForallLeftMulti | RuleTag::CcExistsRightMulti if !self.options.multi_premise_variant => {
                return Err(rejected("multi-witness rules are disabled"));
            }
            _ => {}
        }
        let expected = rule_premises(base, s, node.rule, &node.side)?;
        expect_arity(node, expected.len())?;
        for (k, (want, got)) in expected.iter().zip(&node.premises).enumerate() {
            if !want.same_multisets(&got.conclusion) {
                return Err(rejected(format!(
                    "premise {k} should be `{}`",
                    want.display(base)
                )));
            }
        }
        Ok(())
    }
}
