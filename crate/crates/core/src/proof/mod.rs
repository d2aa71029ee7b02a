//! Derivation trees shared by the proof-search engines.
//!
//! Every node records the rule it applies and, in `side`, every choice the
//! rule makes (deleted positions, principal positions, chosen members of a
//! quantified set), so each node can be checked against its premises alone.

mod text;

use std::fmt;
use std::str::FromStr;

pub use text::{deserialize, serialize, SequentText, HEADER};

use crate::error::ProofError;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleTag {
    /// Prime sequent closed by the entailment relation.
    Prime,
    /// Association / transposition: premise is a rearrangement.
    Struct,
    /// Left weakening `a < b => a ^ c < b`.
    R31,
    /// Right meet `c < a, c < b => c < a ^ b`.
    R32,
    /// Negation right `a ^ b < 0 => a < ~b`.
    R33,
    /// Negation left `a < b => a ^ ~b < c`.
    R34,
    /// Prime two-sided sequent closed by the relation.
    CcPrime,
    /// Contraction: premise carries one more copy of a member.
    CcContract,
    CcWeakenRight,
    CcWeakenLeft,
    CcJoinLeft,
    CcMeetRight,
    CcNegLeft,
    CcNegRight,
    CcForallLeft,
    CcExistsRight,
    CcExistsLeft,
    CcForallRight,
    /// Multi-witness form of [`RuleTag::CcForallLeft`].
    CcForallLeftMulti,
    /// Multi-witness form of [`RuleTag::CcExistsRight`].
    CcExistsRightMulti,
}

impl RuleTag {
    pub const ALL: [RuleTag; 20] = [
        RuleTag::Prime,
        RuleTag::Struct,
        RuleTag::R31,
        RuleTag::R32,
        RuleTag::R33,
        RuleTag::R34,
        RuleTag::CcPrime,
        RuleTag::CcContract,
        RuleTag::CcWeakenRight,
        RuleTag::CcWeakenLeft,
        RuleTag::CcJoinLeft,
        RuleTag::CcMeetRight,
        RuleTag::CcNegLeft,
        RuleTag::CcNegRight,
        RuleTag::CcForallLeft,
        RuleTag::CcExistsRight,
        RuleTag::CcExistsLeft,
        RuleTag::CcForallRight,
        RuleTag::CcForallLeftMulti,
        RuleTag::CcExistsRightMulti,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleTag::Prime => "PRIME",
            RuleTag::Struct => "STRUCT",
            RuleTag::R31 => "R31",
            RuleTag::R32 => "R32",
            RuleTag::R33 => "R33",
            RuleTag::R34 => "R34",
            RuleTag::CcPrime => "C-PRIME",
            RuleTag::CcContract => "C-CONTRACT",
            RuleTag::CcWeakenRight => "C-WEAK-R",
            RuleTag::CcWeakenLeft => "C-WEAK-L",
            RuleTag::CcJoinLeft => "C-JOIN-L",
            RuleTag::CcMeetRight => "C-MEET-R",
            RuleTag::CcNegLeft => "C-NEG-L",
            RuleTag::CcNegRight => "C-NEG-R",
            RuleTag::CcForallLeft => "C-ALL-L",
            RuleTag::CcExistsRight => "C-EX-R",
            RuleTag::CcExistsLeft => "C-EX-L",
            RuleTag::CcForallRight => "C-ALL-R",
            RuleTag::CcForallLeftMulti => "C-ALL-L-MULTI",
            RuleTag::CcExistsRightMulti => "C-EX-R-MULTI",
        }
    }

    pub fn is_ortho(self) -> bool {
        matches!(
            self,
            RuleTag::Prime
                | RuleTag::Struct
                | RuleTag::R31
                | RuleTag::R32
                | RuleTag::R33
                | RuleTag::R34
        )
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleTag::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown rule tag `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation<S> {
    pub conclusion: S,
    pub rule: RuleTag,
    /// Rule-specific witness numbers; see each calculus for the layout.
    pub side: Vec<usize>,
    pub premises: Vec<Derivation<S>>,
}

impl<S> Derivation<S> {
    pub fn leaf(conclusion: S, rule: RuleTag) -> Self {
        Derivation {
            conclusion,
            rule,
            side: Vec::new(),
            premises: Vec::new(),
        }
    }

    pub fn node(conclusion: S, rule: RuleTag, side: Vec<usize>, premises: Vec<Derivation<S>>) -> Self {
        Derivation {
            conclusion,
            rule,
            side,
            premises,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    /// Pre-order walk with the child-index path of each node.
    pub fn walk(&self) -> Vec<(Vec<usize>, &Derivation<S>)> {
        let mut out = Vec::new();
        let mut stack = vec![(Vec::new(), self)];
        while let Some((path, node)) = stack.pop() {
            for (i, p) in node.premises.iter().enumerate().rev() {
                let mut child = path.clone();
                child.push(i);
                stack.push((child, p));
            }
            out.push((path, node));
        }
        out
    }

    pub fn get_mut(&mut self, path: &[usize]) -> Option<&mut Derivation<S>> {
        let mut node = self;
        for &i in path {
            node = node.premises.get_mut(i)?;
        }
        Some(node)
    }

    pub fn rules_used(&self) -> Vec<RuleTag> {
        let mut tags: Vec<RuleTag> = self.walk().into_iter().map(|(_, n)| n.rule).collect();
        tags.sort();
        tags.dedup();
        tags
    }
}

/// Why a single node fails to check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeFault {
    /// Wrong number of premises or unusable side data.
    Malformed(String),
    /// Well-formed but not an instance of its rule.
    Rejected(String),
}

/// A rule system that can check one node against its premises.
pub trait Calculus {
    type Sequent;

    fn check_node(&self, node: &Derivation<Self::Sequent>) -> Result<(), NodeFault>;
}

fn show_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// Accepts iff every node is a correct instance of its rule. Reports the
/// first failing node in pre-order.
pub fn check_derivation<C: Calculus>(calculus: &C, d: &Derivation<C::Sequent>) -> Result<(), ProofError> {
    for (path, node) in d.walk() {
        match calculus.check_node(node) {
            Ok(()) => {}
            Err(NodeFault::Malformed(message)) => {
                return Err(ProofError::Malformed {
                    path: show_path(&path),
                    message,
                })
            }
            Err(NodeFault::Rejected(message)) => {
                return Err(ProofError::Rejected {
                    path: show_path(&path),
                    message,
                })
            }
        }
    }
    Ok(())
}

pub(crate) fn expect_arity<S>(node: &Derivation<S>, n: usize) -> Result<(), NodeFault> {
    if node.premises.len() == n {
        Ok(())
    } else {
        Err(NodeFault::Malformed(format!(
            "{} takes {n} premise(s), found {}",
            node.rule,
            node.premises.len()
        )))
    }
}

pub(crate) fn expect_side<S>(node: &Derivation<S>, n: usize) -> Result<(), NodeFault> {
    if node.side.len() == n {
        Ok(())
    } else {
        Err(NodeFault::Malformed(format!(
            "{} takes {n} side value(s), found {}",
            node.rule,
            node.side.len()
        )))
    }
}
