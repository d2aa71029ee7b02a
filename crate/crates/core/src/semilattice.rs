//! The free semilattice over a preordered set.
//!
//! Elements are finite meet-words `a1 ^ ... ^ an` over the generators. Two
//! words compare by asking the entailment relation whether the factors of the
//! left word entail each factor of the right word. Factor order never
//! matters.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{OrderError, SyntaxError};
use crate::order::{Elem, EntailmentRelation, FiniteStructure, PreorderedSet, Relation};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeetWord {
    factors: Vec<Elem>,
}

impl MeetWord {
    /// A word from its factors. The empty word is the unit and is only
    /// accepted when the base declares one.
    pub fn new(base: &PreorderedSet, factors: Vec<Elem>) -> Result<Self, OrderError> {
        if factors.is_empty() && base.one().is_none() {
            return Err(OrderError::UnknownElement("1".into()));
        }
        if let Some(e) = factors.iter().find(|e| e.0 >= base.len()) {
            return Err(OrderError::UnknownElement(format!("#{}", e.0)));
        }
        Ok(MeetWord { factors })
    }

    pub fn single(e: Elem) -> Self {
        MeetWord { factors: vec![e] }
    }

    pub fn factors(&self) -> &[Elem] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn concat(&self, other: &MeetWord) -> MeetWord {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        MeetWord { factors }
    }

    /// Reads `a ^ b ^ c`. An empty text is the unit.
    pub fn parse(base: &PreorderedSet, text: &str) -> Result<Self, SyntaxError> {
        let text = text.trim();
        if text.is_empty() {
            return MeetWord::new(base, Vec::new()).map_err(|_| SyntaxError::MissingBound("empty word"));
        }
        let mut factors = Vec::new();
        let mut offset = 0;
        for part in text.split('^') {
            let name = part.trim();
            if name.is_empty() {
                return Err(SyntaxError::at(offset, "expected an element name"));
            }
            let e = base
                .lookup(name)
                .ok_or_else(|| SyntaxError::UnknownElement(name.to_string()))?;
            factors.push(e);
            offset += part.len() + 1;
        }
        Ok(MeetWord { factors })
    }

    pub fn display<'a>(&'a self, base: &'a PreorderedSet) -> impl fmt::Display + 'a {
        WordDisplay { word: self, base }
    }

    /// Left side as handed to the relation; the unit stands in for the empty word.
    fn lhs(&self, base: &PreorderedSet) -> Vec<Elem> {
        match (self.factors.is_empty(), base.one()) {
            (true, Some(one)) => vec![one],
            _ => self.factors.clone(),
        }
    }
}

struct WordDisplay<'a> {
    word: &'a MeetWord,
    base: &'a PreorderedSet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.factors.is_empty() {
            let unit = self.base.one().map(|o| self.base.name(o)).unwrap_or("1");
            return f.write_str(unit);
        }
        for (i, e) in self.word.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ^ ")?;
            }
            f.write_str(self.base.name(*e))?;
        }
        Ok(())
    }
}

/// `w1 <= w2` iff the factors of `w1` entail every factor of `w2`.
pub fn meet_leq(rel: &EntailmentRelation, w1: &MeetWord, w2: &MeetWord) -> bool {
    let lhs = w1.lhs(rel.base());
    w2.factors.iter().all(|&b| rel.entails_one(&lhs, b))
}

/// Canonical representative of the class of `w`: factors sorted by name and
/// every factor entailed by the others removed.
pub fn meet_normalize(rel: &EntailmentRelation, w: &MeetWord) -> MeetWord {
    let base = rel.base();
    let mut factors = w.factors.clone();
    factors.sort_by(|a, b| base.name(*a).cmp(base.name(*b)).then(a.cmp(b)));
    factors.dedup();
    let mut i = 0;
    while i < factors.len() {
        let rest: Vec<Elem> = factors
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &e)| e)
            .collect();
        let rest_word = MeetWord { factors: rest };
        let deletable = if rest_word.factors.is_empty() {
            base.one().is_some() && rel.entails_one(&rest_word.lhs(base), factors[i])
        } else {
            rel.entails_one(&rest_word.factors, factors[i])
        };
        if deletable {
            factors = rest_word.factors;
            i = 0;
        } else {
            i += 1;
        }
    }
    MeetWord { factors }
}

/// Evaluates `w` in a finite semilattice by folding its factors through the
/// meet table, left to right.
pub fn fold_hom(
    target: &FiniteStructure,
    base: &PreorderedSet,
    assignment: &BTreeMap<Elem, usize>,
    w: &MeetWord,
) -> Result<usize, OrderError> {
    let image = |e: Elem| {
        assignment
            .get(&e)
            .copied()
            .ok_or_else(|| OrderError::IncompleteAssignment(base.name(e).to_string()))
    };
    let mut factors = w.factors.iter();
    let Some(&first) = factors.next() else {
        return target
            .one
            .ok_or_else(|| OrderError::IncompleteAssignment("1".into()));
    };
    let mut acc = image(first)?;
    for &e in factors {
        acc = target.meet_of(acc, image(e)?);
    }
    Ok(acc)
}

/// Every word of length `1..=max_len` with its order and meet table, as a
/// finite structure. The meet of two words is the first listed word
/// equivalent to their concatenation; `None` when no such word is listed.
pub fn word_structure(
    rel: &EntailmentRelation,
    max_len: usize,
) -> Option<(Vec<MeetWord>, FiniteStructure)> {
    let base = rel.base();
    let mut words: Vec<MeetWord> = Vec::new();
    let mut frontier: Vec<Vec<Elem>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &frontier {
            for e in base.elements() {
                let mut f = prefix.clone();
                f.push(e);
                words.push(MeetWord { factors: f.clone() });
                next.push(f);
            }
        }
        frontier = next;
    }
    let n = words.len();
    let mut leq = Relation::empty(n);
    for (i, wi) in words.iter().enumerate() {
        for (j, wj) in words.iter().enumerate() {
            if meet_leq(rel, wi, wj) {
                leq.insert(i, j);
            }
        }
    }
    let equiv = |a: &MeetWord, b: &MeetWord| meet_leq(rel, a, b) && meet_leq(rel, b, a);
    let mut meet = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let c = words[i].concat(&words[j]);
            meet[i][j] = words.iter().position(|w| equiv(w, &c))?;
        }
    }
    let carrier = words.iter().map(|w| w.display(base).to_string()).collect();
    let mut s = FiniteStructure::from_order(carrier, leq);
    s.meet = Some(meet);
    Some((words, s))
}
