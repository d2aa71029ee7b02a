//! Finite preordered sets and the entailment relations built on them.
//!
//! A [`PreorderedSet`] is always stored closed: the relation is reflexive and
//! transitive from construction onwards. Elements related both ways are
//! equivalent (see [`PreorderedSet::equiv`]) but stay distinct elements.

mod entail;
mod parse;
mod structure;

use std::collections::HashMap;
use std::fmt;

pub use entail::{
    check_entailment_axioms, free_entailment, ArityMode, AxiomReport, AxiomViolation,
    EntailmentRelation,
};
pub(crate) use parse::is_name_char;
pub use parse::parse_poset;
pub use structure::{
    check_homomorphism, enumerate_partial_orders, enumerate_preorders, FiniteStructure, HomReport,
    HomomorphismWitness,
};

use crate::error::OrderError;

/// Index of a generator inside its [`PreorderedSet`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub usize);

/// Square boolean matrix used for relations on a finite carrier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    size: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(size: usize) -> Self {
        Relation {
            size,
            bits: vec![false; size * size],
        }
    }

    pub fn from_pairs(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut rel = Relation::empty(size);
        for (a, b) in pairs {
            rel.insert(a, b);
        }
        rel
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.size + b]
    }

    pub fn insert(&mut self, a: usize, b: usize) -> bool {
        let slot = &mut self.bits[a * self.size + b];
        let fresh = !*slot;
        *slot = true;
        fresh
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size).flat_map(move |a| {
            (0..self.size)
                .filter(move |&b| self.contains(a, b))
                .map(move |b| (a, b))
        })
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size).all(|a| self.contains(a, a))
    }

    pub fn is_transitive(&self) -> bool {
        for a in 0..self.size {
            for b in 0..self.size {
                if !self.contains(a, b) {
                    continue;
                }
                for c in 0..self.size {
                    if self.contains(b, c) && !self.contains(a, c) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Smallest reflexive and transitive relation containing `relation`.
pub fn preorder_closure(relation: &Relation) -> Relation {
    let n = relation.size();
    let mut closed = relation.clone();
    for a in 0..n {
        closed.insert(a, a);
    }
    // Warshall
    for k in 0..n {
        for i in 0..n {
            if !closed.contains(i, k) {
                continue;
            }
            for j in 0..n {
                if closed.contains(k, j) {
                    closed.insert(i, j);
                }
            }
        }
    }
    closed
}

/// A finite set of named generators with a closed preorder and optional bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreorderedSet {
    names: Vec<String>,
    index: HashMap<String, usize>,
    leq: Relation,
    zero: Option<Elem>,
    one: Option<Elem>,
}

impl PreorderedSet {
    /// Builds a set from names and raw edges `(a, b)` meaning `a <= b`.
    ///
    /// Declared bounds contribute the edges `zero <= a <= one` before the
    /// closure is taken.
    pub fn new(
        names: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        bounds: Option<(usize, usize)>,
    ) -> Result<Self, OrderError> {
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(OrderError::DuplicateElement(name.clone()));
            }
        }
        let n = names.len();
        let mut raw = Relation::empty(n);
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(OrderError::IndexOutOfRange);
            }
            raw.insert(a, b);
        }
        if let Some((z, o)) = bounds {
            if z >= n || o >= n {
                return Err(OrderError::IndexOutOfRange);
            }
            for a in 0..n {
                raw.insert(z, a);
                raw.insert(a, o);
            }
        }
        Ok(PreorderedSet {
            names,
            index,
            leq: preorder_closure(&raw),
            zero: bounds.map(|(z, _)| Elem(z)),
            one: bounds.map(|(_, o)| Elem(o)),
        })
    }

    /// Convenience constructor from name slices, used heavily in tests.
    pub fn from_names(
        names: &[&str],
        edges: &[(&str, &str)],
        bounds: Option<(&str, &str)>,
    ) -> Result<Self, OrderError> {
        let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let pos = |s: &str| {
            names
                .iter()
                .position(|n| *n == s)
                .ok_or_else(|| OrderError::UnknownElement(s.to_string()))
        };
        let mut raw = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            raw.push((pos(a)?, pos(b)?));
        }
        let bounds = match bounds {
            Some((z, o)) => Some((pos(z)?, pos(o)?)),
            None => None,
        };
        PreorderedSet::new(owned, raw, bounds)
    }

    /// Bounded chain `names[0] < names[1] < ...`, with the ends as bounds.
    pub fn chain(names: &[&str]) -> Self {
        let edges: Vec<(usize, usize)> = (1..names.len()).map(|i| (i - 1, i)).collect();
        let bounds = if names.len() >= 2 {
            Some((0, names.len() - 1))
        } else {
            None
        };
        PreorderedSet::new(names.iter().map(|s| s.to_string()).collect(), edges, bounds)
            .expect("chain names are distinct")
    }

    /// `{0, g1, ..., gk, 1}` with the generators pairwise incomparable.
    pub fn bounded_antichain(generators: &[&str]) -> Self {
        let mut names = vec!["0".to_string()];
        names.extend(generators.iter().map(|s| s.to_string()));
        names.push("1".to_string());
        let top = names.len() - 1;
        PreorderedSet::new(names, [], Some((0, top))).expect("distinct generator names")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.names.len()).map(Elem)
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied().map(Elem)
    }

    pub fn resolve(&self, name: &str) -> Result<Elem, OrderError> {
        self.lookup(name)
            .ok_or_else(|| OrderError::UnknownElement(name.to_string()))
    }

    pub fn relation(&self) -> &Relation {
        &self.leq
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq.contains(a.0, b.0)
    }

    pub fn equiv(&self, a: Elem, b: Elem) -> bool {
        self.leq(a, b) && self.leq(b, a)
    }

    /// [`equiv`](Self::equiv) on element names.
    pub fn equiv_named(&self, a: &str, b: &str) -> Result<bool, OrderError> {
        Ok(self.equiv(self.resolve(a)?, self.resolve(b)?))
    }

    pub fn zero(&self) -> Option<Elem> {
        self.zero
    }

    pub fn one(&self) -> Option<Elem> {
        self.one
    }

    pub fn is_bounded(&self) -> bool {
        self.zero.is_some() && self.one.is_some()
    }

    /// The same generators under the reversed order, with the bounds swapped.
    pub fn dual(&self) -> PreorderedSet {
        let n = self.len();
        let rev = Relation::from_pairs(n, self.leq.pairs().map(|(a, b)| (b, a)));
        PreorderedSet {
            names: self.names.clone(),
            index: self.index.clone(),
            leq: rev,
            zero: self.one,
            one: self.zero,
        }
    }
}

impl fmt::Display for PreorderedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "elements {}", self.names.join(" "))?;
        let strict: Vec<String> = self
            .leq
            .pairs()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| format!("{}<{}", self.names[a], self.names[b]))
            .collect();
        if !strict.is_empty() {
            write!(f, "; order {}", strict.join(", "))?;
        }
        if let (Some(z), Some(o)) = (self.zero, self.one) {
            write!(f, "; bounds {} {}", self.names[z.0], self.names[o.0])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_adds_transitive_and_reflexive_pairs() {
        let raw = Relation::from_pairs(3, [(0, 1), (1, 2)]);
        let closed = preorder_closure(&raw);
        assert!(closed.contains(0, 2));
        assert!((0..3).all(|a| closed.contains(a, a)));
        assert_eq!(closed.len(), 6);
    }

    #[test]
    fn closure_of_empty_relation_is_identity() {
        let closed = preorder_closure(&Relation::empty(1));
        assert_eq!(closed.pairs().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn four_chain_has_ten_pairs() {
        let raw = Relation::from_pairs(4, [(0, 1), (1, 2), (2, 3)]);
        let closed = preorder_closure(&raw);
        // brute force: i <= j reachable along the chain iff i <= j
        let expected: Vec<(usize, usize)> = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| i <= j).map(move |j| (i, j)))
            .collect();
        assert_eq!(closed.pairs().collect::<Vec<_>>(), expected);
        assert_eq!(closed.len(), 10);
    }

    #[test]
    fn equivalent_elements_stay_distinct() {
        let m = PreorderedSet::from_names(&["a", "b"], &[("a", "b"), ("b", "a")], None).unwrap();
        assert!(m.equiv_named("a", "b").unwrap());
        assert_ne!(m.resolve("a").unwrap(), m.resolve("b").unwrap());
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn equiv_basic_cases() {
        let m = PreorderedSet::chain(&["0", "1"]);
        assert!(m.equiv_named("0", "0").unwrap());
        assert!(!m.equiv_named("0", "1").unwrap());
        assert!(m.equiv_named("0", "x").is_err());
    }

    #[test]
    fn duplicate_names_rejected() {
        let err = PreorderedSet::from_names(&["a", "a"], &[], None);
        assert!(err.is_err());
    }

    #[test]
    fn dual_reverses_order_and_swaps_bounds() {
        let m = PreorderedSet::chain(&["0", "p", "1"]);
        let d = m.dual();
        let (z, p, o) = (Elem(0), Elem(1), Elem(2));
        assert!(d.leq(p, z));
        assert!(d.leq(o, p));
        assert_eq!(d.zero(), Some(o));
        assert_eq!(d.one(), Some(z));
    }
}
