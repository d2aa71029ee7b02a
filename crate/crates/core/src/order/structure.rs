use crate::error::OrderError;

use super::{preorder_closure, Relation};

/// A finite carrier with an order and optional operation tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStructure {
    pub carrier: Vec<String>,
    pub leq: Relation,
    pub meet: Option<Vec<Vec<usize>>>,
    pub join: Option<Vec<Vec<usize>>>,
    pub neg: Option<Vec<usize>>,
    pub zero: Option<usize>,
    pub one: Option<usize>,
}

impl FiniteStructure {
    /// Wraps an order; the relation is closed if it was not already.
    pub fn from_order(carrier: Vec<String>, leq: Relation) -> Self {
        let leq = preorder_closure(&leq);
        let n = carrier.len();
        let least = (0..n).find(|&z| (0..n).all(|a| leq.contains(z, a)));
        let greatest = (0..n).find(|&o| (0..n).all(|a| leq.contains(a, o)));
        FiniteStructure {
            carrier,
            leq,
            meet: None,
            join: None,
            neg: None,
            zero: least,
            one: greatest,
        }
    }

    /// Labels `0..n` as carrier names.
    pub fn numbered(leq: Relation) -> Self {
        let carrier = (0..leq.size()).map(|i| i.to_string()).collect();
        FiniteStructure::from_order(carrier, leq)
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq.contains(a, b)
    }

    pub fn equiv(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) && self.leq(b, a)
    }

    fn glb(&self, a: usize, b: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.len())
            .filter(|&c| self.leq(c, a) && self.leq(c, b))
            .collect();
        lower
            .iter()
            .copied()
            .find(|&c| lower.iter().all(|&x| self.leq(x, c)))
    }

    fn lub(&self, a: usize, b: usize) -> Option<usize> {
        let upper: Vec<usize> = (0..self.len())
            .filter(|&c| self.leq(a, c) && self.leq(b, c))
            .collect();
        upper
            .iter()
            .copied()
            .find(|&c| upper.iter().all(|&x| self.leq(c, x)))
    }

    /// Fills the meet table, or returns `None` when some pair has no meet.
    pub fn with_meets(mut self) -> Option<Self> {
        let n = self.len();
        let mut table = vec![vec![0; n]; n];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = self.glb(a, b)?;
            }
        }
        self.meet = Some(table);
        Some(self)
    }

    pub fn with_joins(mut self) -> Option<Self> {
        let n = self.len();
        let mut table = vec![vec![0; n]; n];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = self.lub(a, b)?;
            }
        }
        self.join = Some(table);
        Some(self)
    }

    /// Fills the orthocomplement `~c = max { a : a ^ c <= 0 }` when it exists
    /// for every `c`. Needs meets and a zero.
    pub fn with_orthocomplement(mut self) -> Option<Self> {
        let meet = self.meet.as_ref()?;
        let zero = self.zero?;
        let n = self.len();
        let mut neg = Vec::with_capacity(n);
        for c in 0..n {
            let disjoint: Vec<usize> = (0..n).filter(|&a| self.leq(meet[a][c], zero)).collect();
            let top = disjoint
                .iter()
                .copied()
                .find(|&d| disjoint.iter().all(|&x| self.leq(x, d)))?;
            neg.push(top);
        }
        self.neg = Some(neg);
        Some(self)
    }

    pub fn meet_of(&self, a: usize, b: usize) -> usize {
        self.meet.as_ref().expect("structure has meets")[a][b]
    }

    /// Checks the invariants of the structure; returns human-readable violations.
    pub fn validate(&self) -> Vec<String> {
        let n = self.len();
        let mut out = Vec::new();
        if self.leq.size() != n {
            out.push("order size differs from carrier".to_string());
            return out;
        }
        if !self.leq.is_reflexive() || !self.leq.is_transitive() {
            out.push("order is not a preorder".to_string());
        }
        if let Some(z) = self.zero {
            if (0..n).any(|a| !self.leq(z, a)) {
                out.push("zero is not least".to_string());
            }
        }
        if let Some(o) = self.one {
            if (0..n).any(|a| !self.leq(a, o)) {
                out.push("one is not greatest".to_string());
            }
        }
        let table_ok = |t: &Vec<Vec<usize>>| t.len() == n && t.iter().all(|r| r.len() == n && r.iter().all(|&x| x < n));
        if let Some(meet) = &self.meet {
            if !table_ok(meet) {
                out.push("meet table not total".to_string());
            } else {
                for a in 0..n {
                    for b in 0..n {
                        let c = meet[a][b];
                        if !self.leq(c, a) || !self.leq(c, b) {
                            out.push(format!("meet({a},{b}) is not a lower bound"));
                        }
                        if (0..n).any(|x| self.leq(x, a) && self.leq(x, b) && !self.leq(x, c)) {
                            out.push(format!("meet({a},{b}) is not greatest"));
                        }
                    }
                }
            }
        }
        if let Some(join) = &self.join {
            if !table_ok(join) {
                out.push("join table not total".to_string());
            } else {
                for a in 0..n {
                    for b in 0..n {
                        let c = join[a][b];
                        if !self.leq(a, c) || !self.leq(b, c) {
                            out.push(format!("join({a},{b}) is not an upper bound"));
                        }
                        if (0..n).any(|x| self.leq(a, x) && self.leq(b, x) && !self.leq(c, x)) {
                            out.push(format!("join({a},{b}) is not least"));
                        }
                    }
                }
            }
        }
        if let Some(neg) = &self.neg {
            match (&self.meet, self.zero) {
                (Some(meet), Some(z)) if neg.len() == n && table_ok(meet) => {
                    for c in 0..n {
                        for a in 0..n {
                            if self.leq(meet[a][c], z) != self.leq(a, neg[c]) {
                                out.push(format!("~{c} fails the orthocomplement law at {a}"));
                            }
                        }
                    }
                }
                _ => out.push("negation needs a total meet table and a zero".to_string()),
            }
        }
        out
    }
}

/// A relation between two carriers, listed as `(source, target)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomomorphismWitness {
    pub pairs: Vec<(usize, usize)>,
}

impl HomomorphismWitness {
    pub fn from_map(map: &[usize]) -> Self {
        HomomorphismWitness {
            pairs: map.iter().copied().enumerate().collect(),
        }
    }

    /// Adds every `(a, b')` with `b' ≡ a'` for some existing `(a, a')`.
    pub fn saturate(&self, dst: &FiniteStructure) -> Self {
        let mut pairs = Vec::new();
        for &(a, a1) in &self.pairs {
            for a2 in 0..dst.len() {
                if dst.equiv(a1, a2) && !pairs.contains(&(a, a2)) {
                    pairs.push((a, a2));
                }
            }
        }
        HomomorphismWitness { pairs }
    }

    fn related(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a, b))
    }
}

/// Which homomorphism conditions a witness satisfies. `None` means the
/// condition does not apply because a table is missing on one side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomReport {
    pub total: bool,
    pub closed_under_equiv: bool,
    pub monotone: bool,
    pub preserves_meets: Option<bool>,
    pub preserves_joins: Option<bool>,
    pub reflects_order: bool,
    pub onto: bool,
}

impl HomReport {
    pub fn is_homomorphism(&self) -> bool {
        self.total && self.closed_under_equiv && self.monotone
    }

    pub fn is_semilattice_homomorphism(&self) -> bool {
        self.is_homomorphism() && self.preserves_meets == Some(true)
    }
}

/// Evaluates the homomorphism conditions of a relation `src ⌢ dst`.
pub fn check_homomorphism(
    w: &HomomorphismWitness,
    src: &FiniteStructure,
    dst: &FiniteStructure,
) -> Result<HomReport, OrderError> {
    for &(a, b) in &w.pairs {
        if a >= src.len() {
            return Err(OrderError::UnknownCarrierMember(a));
        }
        if b >= dst.len() {
            return Err(OrderError::UnknownCarrierMember(b));
        }
    }
    let total = (0..src.len()).all(|a| w.pairs.iter().any(|&(x, _)| x == a));
    let onto = (0..dst.len()).all(|b| w.pairs.iter().any(|&(_, y)| y == b));
    let closed_under_equiv = w.pairs.iter().all(|&(a, a1)| {
        (0..dst.len()).all(|a2| !dst.equiv(a1, a2) || w.related(a, a2))
    });
    let mut monotone = true;
    let mut reflects_order = true;
    for &(a, a1) in &w.pairs {
        for &(b, b1) in &w.pairs {
            if src.leq(a, b) && !dst.leq(a1, b1) {
                monotone = false;
            }
            if dst.leq(a1, b1) && !src.leq(a, b) {
                reflects_order = false;
            }
        }
    }
    let preserves = |s: &Option<Vec<Vec<usize>>>, d: &Option<Vec<Vec<usize>>>| match (s, d) {
        (Some(st), Some(dt)) => Some(w.pairs.iter().all(|&(a, a1)| {
            w.pairs.iter().all(|&(b, b1)| {
                let (c, c1) = (st[a][b], dt[a1][b1]);
                (0..src.len()).filter(|&x| src.equiv(x, c)).all(|x| {
                    (0..dst.len())
                        .filter(|&y| dst.equiv(y, c1))
                        .all(|y| w.related(x, y))
                })
            })
        })),
        _ => None,
    };
    Ok(HomReport {
        total,
        closed_under_equiv,
        monotone,
        preserves_meets: preserves(&src.meet, &dst.meet),
        preserves_joins: preserves(&src.join, &dst.join),
        reflects_order,
        onto,
    })
}

/// Every partial order on `0..n` (labelled, not up to isomorphism).
pub fn enumerate_partial_orders(n: usize) -> Vec<Relation> {
    enumerate_closed(n, true)
}

/// Every preorder on `0..n` (labelled).
pub fn enumerate_preorders(n: usize) -> Vec<Relation> {
    enumerate_closed(n, false)
}

fn enumerate_closed(n: usize, antisymmetric: bool) -> Vec<Relation> {
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    assert!(off.len() < 32, "enumeration limited to small carriers");
    let mut out = Vec::new();
    for mask in 0u32..(1 << off.len()) {
        let mut rel = Relation::empty(n);
        for a in 0..n {
            rel.insert(a, a);
        }
        for (i, &(a, b)) in off.iter().enumerate() {
            if mask & (1 << i) != 0 {
                rel.insert(a, b);
            }
        }
        if !rel.is_transitive() {
            continue;
        }
        if antisymmetric && off.iter().any(|&(a, b)| rel.contains(a, b) && rel.contains(b, a)) {
            continue;
        }
        out.push(rel);
    }
    out
}
