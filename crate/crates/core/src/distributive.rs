//! The free distributive lattice over a preordered set.
//!
//! Terms are brought into join-of-meets form ([`DnfTerm`]). A disjunct `α`
//! lies below a join `β1 v ... v βn` when every way of picking one factor from
//! each `βi` yields a sequent `α |- picks` accepted by the two-sided relation;
//! a whole join lies below another when each of its disjuncts does.

use std::collections::HashMap;
use std::fmt;

use crate::error::SyntaxError;
use crate::order::{Elem, EntailmentRelation, PreorderedSet};
use crate::semilattice::{meet_normalize, MeetWord};
use crate::syntax::{tokenize, Cursor, Tok};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LatticeTerm {
    Leaf(Elem),
    Meet(Box<LatticeTerm>, Box<LatticeTerm>),
    Join(Box<LatticeTerm>, Box<LatticeTerm>),
}

impl LatticeTerm {
    pub fn meet(a: LatticeTerm, b: LatticeTerm) -> Self {
        LatticeTerm::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: LatticeTerm, b: LatticeTerm) -> Self {
        LatticeTerm::Join(Box::new(a), Box::new(b))
    }

    pub fn depth(&self) -> usize {
        match self {
            LatticeTerm::Leaf(_) => 0,
            LatticeTerm::Meet(a, b) | LatticeTerm::Join(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Reads terms with `^` (meet), `v` (join) and parentheses; `^` binds
    /// tighter than `v`, both associate to the left.
    pub fn parse(base: &PreorderedSet, text: &str) -> Result<Self, SyntaxError> {
        let toks = tokenize(text)?;
        let mut cur = Cursor::new(&toks, text.len());
        let t = parse_join(base, &mut cur)?;
        cur.finish()?;
        Ok(t)
    }

    pub fn display<'a>(&'a self, base: &'a PreorderedSet) -> impl fmt::Display + 'a {
        TermDisplay { term: self, base }
    }
}

fn parse_join(base: &PreorderedSet, cur: &mut Cursor<'_>) -> Result<LatticeTerm, SyntaxError> {
    let mut t = parse_meet(base, cur)?;
    while cur.eat(&Tok::Join) {
        t = LatticeTerm::join(t, parse_meet(base, cur)?);
    }
    Ok(t)
}

fn parse_meet(base: &PreorderedSet, cur: &mut Cursor<'_>) -> Result<LatticeTerm, SyntaxError> {
    let mut t = parse_atom(base, cur)?;
    while cur.eat(&Tok::Meet) {
        t = LatticeTerm::meet(t, parse_atom(base, cur)?);
    }
    Ok(t)
}

fn parse_atom(base: &PreorderedSet, cur: &mut Cursor<'_>) -> Result<LatticeTerm, SyntaxError> {
    let offset = cur.offset();
    match cur.bump().cloned() {
        Some(Tok::LParen) => {
            let t = parse_join(base, cur)?;
            cur.expect(&Tok::RParen, "`)`")?;
            Ok(t)
        }
        Some(Tok::Name(n)) => base
            .lookup(&n)
            .map(LatticeTerm::Leaf)
            .ok_or(SyntaxError::UnknownElement(n)),
        _ => Err(SyntaxError::at(offset, "expected an element or `(`")),
    }
}

struct TermDisplay<'a> {
    term: &'a LatticeTerm,
    base: &'a PreorderedSet,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            LatticeTerm::Leaf(e) => f.write_str(self.base.name(*e)),
            LatticeTerm::Meet(a, b) => write!(
                f,
                "({} ^ {})",
                a.display(self.base),
                b.display(self.base)
            ),
            LatticeTerm::Join(a, b) => write!(
                f,
                "({} v {})",
                a.display(self.base),
                b.display(self.base)
            ),
        }
    }
}

/// A join of meet-words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DnfTerm {
    disjuncts: Vec<MeetWord>,
}

impl DnfTerm {
    pub fn new(disjuncts: Vec<MeetWord>) -> Option<Self> {
        if disjuncts.is_empty() {
            None
        } else {
            Some(DnfTerm { disjuncts })
        }
    }

    pub fn leaf(e: Elem) -> Self {
        DnfTerm {
            disjuncts: vec![MeetWord::single(e)],
        }
    }

    pub fn disjuncts(&self) -> &[MeetWord] {
        &self.disjuncts
    }

    pub fn join(&self, other: &DnfTerm) -> DnfTerm {
        let mut disjuncts = self.disjuncts.clone();
        disjuncts.extend_from_slice(&other.disjuncts);
        DnfTerm { disjuncts }
    }

    /// Meet by distributing: every disjunct of `self` against every disjunct
    /// of `other`.
    pub fn meet(&self, other: &DnfTerm) -> DnfTerm {
        let disjuncts = self
            .disjuncts
            .iter()
            .flat_map(|a| other.disjuncts.iter().map(move |b| a.concat(b)))
            .collect();
        DnfTerm { disjuncts }
    }

    /// Purely syntactic canonical form: factors sorted and deduplicated in
    /// each disjunct, disjuncts sorted and deduplicated. No order information
    /// is used.
    pub fn syntactic_key(&self) -> Vec<Vec<Elem>> {
        let mut ds: Vec<Vec<Elem>> = self
            .disjuncts
            .iter()
            .map(|w| {
                let mut f = w.factors().to_vec();
                f.sort();
                f.dedup();
                f
            })
            .collect();
        ds.sort();
        ds.dedup();
        ds
    }

    pub fn display<'a>(&'a self, base: &'a PreorderedSet) -> impl fmt::Display + 'a {
        DnfDisplay { dnf: self, base }
    }
}

struct DnfDisplay<'a> {
    dnf: &'a DnfTerm,
    base: &'a PreorderedSet,
}

impl fmt::Display for DnfDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let many = self.dnf.disjuncts.len() > 1;
        for (i, w) in self.dnf.disjuncts.iter().enumerate() {
            if i > 0 {
                f.write_str(" v ")?;
            }
            if many && w.len() > 1 {
                write!(f, "({})", w.display(self.base))?;
            } else {
                write!(f, "{}", w.display(self.base))?;
            }
        }
        Ok(())
    }
}

/// Distributes meets over joins.
pub fn to_dnf(t: &LatticeTerm) -> DnfTerm {
    match t {
        LatticeTerm::Leaf(e) => DnfTerm::leaf(*e),
        LatticeTerm::Meet(a, b) => to_dnf(a).meet(&to_dnf(b)),
        LatticeTerm::Join(a, b) => to_dnf(a).join(&to_dnf(b)),
    }
}

/// Order of the free distributive lattice generated by a two-sided relation.
pub fn dnf_leq(rel: &EntailmentRelation, d1: &DnfTerm, d2: &DnfTerm) -> bool {
    let mut memo: HashMap<&MeetWord, bool> = HashMap::new();
    d1.disjuncts.iter().all(|alpha| {
        if let Some(&v) = memo.get(alpha) {
            return v;
        }
        let v = word_below_join(rel, alpha, &d2.disjuncts);
        memo.insert(alpha, v);
        v
    })
}

/// `α |- β1, ..., βn` for every choice of one factor per `βi`.
fn word_below_join(rel: &EntailmentRelation, alpha: &MeetWord, betas: &[MeetWord]) -> bool {
    let base = rel.base();
    let lhs: Vec<Elem> = if alpha.is_unit() {
        base.one().into_iter().collect()
    } else {
        alpha.factors().to_vec()
    };
    let mut picks = Vec::with_capacity(betas.len());
    every_choice(rel, &lhs, betas, &mut picks)
}

fn every_choice(
    rel: &EntailmentRelation,
    lhs: &[Elem],
    betas: &[MeetWord],
    picks: &mut Vec<Elem>,
) -> bool {
    // right weakening: once the partial choice is entailed, every extension is
    if !picks.is_empty() && rel.entails(lhs, picks) {
        return true;
    }
    let Some((beta, rest)) = betas.split_first() else {
        return !picks.is_empty() && rel.entails(lhs, picks);
    };
    beta.factors().iter().all(|&b| {
        picks.push(b);
        let ok = every_choice(rel, lhs, rest, picks);
        picks.pop();
        ok
    })
}

/// Canonical form: normalized meet-words, disjuncts absorbed by another
/// disjunct removed (this drops `0` next to anything), sorted.
pub fn dnf_normalize(rel: &EntailmentRelation, d: &DnfTerm) -> DnfTerm {
    let mut words: Vec<MeetWord> = d.disjuncts.iter().map(|w| meet_normalize(rel, w)).collect();
    words.sort();
    words.dedup();
    let below = |a: &MeetWord, b: &MeetWord| word_below_join(rel, a, std::slice::from_ref(b));
    let mut kept: Vec<MeetWord> = Vec::new();
    for (i, w) in words.iter().enumerate() {
        let absorbed = words.iter().enumerate().any(|(j, v)| {
            j != i && below(w, v) && (!below(v, w) || j < i)
        });
        if !absorbed {
            kept.push(w.clone());
        }
    }
    let base = rel.base();
    kept.sort_by(|a, b| {
        let key = |w: &MeetWord| w.factors().iter().map(|e| base.name(*e).to_string()).collect::<Vec<_>>();
        key(a).cmp(&key(b))
    });
    DnfTerm { disjuncts: kept }
}

/// Anything that can be evaluated in the two-element chain.
pub trait ChainEval {
    fn eval_bool(&self, v: &[bool]) -> bool;
}

impl ChainEval for LatticeTerm {
    fn eval_bool(&self, v: &[bool]) -> bool {
        match self {
            LatticeTerm::Leaf(e) => v[e.0],
            LatticeTerm::Meet(a, b) => a.eval_bool(v) && b.eval_bool(v),
            LatticeTerm::Join(a, b) => a.eval_bool(v) || b.eval_bool(v),
        }
    }
}

impl ChainEval for DnfTerm {
    fn eval_bool(&self, v: &[bool]) -> bool {
        self.disjuncts
            .iter()
            .any(|w| w.factors().iter().all(|e| v[e.0]))
    }
}

/// All monotone maps `M -> {0, 1}` sending declared bounds to the bounds.
pub fn monotone_valuations(base: &PreorderedSet) -> Vec<Vec<bool>> {
    let n = base.len();
    assert!(n < 24, "valuation enumeration limited to small bases");
    (0u32..(1 << n))
        .map(|mask| (0..n).map(|i| mask & (1 << i) != 0).collect::<Vec<bool>>())
        .filter(|v| {
            base.relation().pairs().all(|(a, b)| !v[a] || v[b])
                && base.zero().is_none_or(|z| !v[z.0])
                && base.one().is_none_or(|o| v[o.0])
        })
        .collect()
}

/// Brute-force comparison in the two-element chain: `x <= y` iff every
/// monotone valuation gives `v(x) <= v(y)`.
pub fn chain_valuation_oracle<T: ChainEval, U: ChainEval>(base: &PreorderedSet, x: &T, y: &U) -> bool {
    monotone_valuations(base)
        .iter()
        .all(|v| !x.eval_bool(v) || y.eval_bool(v))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::order::ArityMode;

    fn setup(base: PreorderedSet) -> EntailmentRelation {
        EntailmentRelation::free(Arc::new(base), ArityMode::TwoSided)
    }

    fn dnf(rel: &EntailmentRelation, text: &str) -> DnfTerm {
        to_dnf(&LatticeTerm::parse(rel.base(), text).unwrap())
    }

    #[test]
    fn distribution_examples() {
        let rel = setup(PreorderedSet::from_names(&["a", "b", "c", "d"], &[], None).unwrap());
        let base = rel.base();
        assert_eq!(dnf(&rel, "a ^ (b v c)").display(base).to_string(), "(a ^ b) v (a ^ c)");
        assert_eq!(dnf(&rel, "a").display(base).to_string(), "a");
        assert_eq!(
            dnf(&rel, "(a v b) ^ (c v d)").display(base).to_string(),
            "(a ^ c) v (a ^ d) v (b ^ c) v (b ^ d)"
        );
    }

    #[test]
    fn leq_examples() {
        let rel = setup(PreorderedSet::from_names(&["a", "b", "c"], &[], None).unwrap());
        let x = dnf(&rel, "a ^ (b v c)");
        let y = dnf(&rel, "(a ^ b) v (a ^ c)");
        assert!(dnf_leq(&rel, &x, &y) && dnf_leq(&rel, &y, &x));
        // v(a) = 1, v(b) = v(c) = 0 separates them
        assert!(!dnf_leq(&rel, &dnf(&rel, "a"), &dnf(&rel, "b v c")));

        let chain = setup(PreorderedSet::chain(&["0", "1"]));
        for t in ["0", "1", "0 v 1", "1 ^ 0", "(1 v 0) ^ 1"] {
            assert!(dnf_leq(&chain, &dnf(&chain, "0"), &dnf(&chain, t)));
            assert!(dnf_leq(&chain, &dnf(&chain, t), &dnf(&chain, "1")));
        }
    }

    #[test]
    fn oracle_examples() {
        let base = PreorderedSet::from_names(&["a", "b"], &[("a", "b")], None).unwrap();
        let a = LatticeTerm::parse(&base, "a").unwrap();
        let b = LatticeTerm::parse(&base, "b").unwrap();
        assert!(chain_valuation_oracle(&base, &a, &a));
        assert!(chain_valuation_oracle(&base, &a, &b));
        assert!(!chain_valuation_oracle(&base, &b, &a));
    }

    #[test]
    fn normalization_drops_absorbed_and_bounds() {
        let rel = setup(PreorderedSet::chain(&["0", "p", "1"]));
        let base = rel.base();
        let n = dnf_normalize(&rel, &dnf(&rel, "0 v p"));
        assert_eq!(n.display(base).to_string(), "p");
        let n = dnf_normalize(&rel, &dnf(&rel, "(1 ^ p) v (p ^ p)"));
        assert_eq!(n.display(base).to_string(), "p");
        let free = setup(PreorderedSet::from_names(&["a", "b"], &[], None).unwrap());
        let n = dnf_normalize(&free, &dnf(&free, "b v (a ^ b) v a"));
        assert_eq!(n.display(free.base()).to_string(), "a v b");
    }

    #[test]
    fn parse_errors() {
        let base = PreorderedSet::from_names(&["a"], &[], None).unwrap();
        assert!(LatticeTerm::parse(&base, "a ^").is_err());
        assert!(LatticeTerm::parse(&base, "(a").is_err());
        assert_eq!(
            LatticeTerm::parse(&base, "z"),
            Err(SyntaxError::UnknownElement("z".into()))
        );
        assert_eq!(LatticeTerm::parse(&base, "a ^ (a v a)").unwrap().depth(), 2);
    }
}
