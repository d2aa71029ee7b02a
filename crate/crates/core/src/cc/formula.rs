use std::fmt;

use crate::error::SyntaxError;
use crate::order::{Elem, PreorderedSet};
use crate::ortho::{resolve_name, shift};
use crate::proof::SequentText;
use crate::syntax::{tokenize, Cursor, Tok};

/// Formulas with `^`, `v`, `~` and meets `A{...}` / joins `E{...}` of finite
/// sets. Member sets are kept sorted and free of duplicates, so equal sets
/// compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CcFormula {
    Prime(Elem),
    And(Box<CcFormula>, Box<CcFormula>),
    Or(Box<CcFormula>, Box<CcFormula>),
    Neg(Box<CcFormula>),
    Forall(Vec<CcFormula>),
    Exists(Vec<CcFormula>),
}

fn canonical_set(mut members: Vec<CcFormula>) -> Option<Vec<CcFormula>> {
    members.sort();
    members.dedup();
    (!members.is_empty()).then_some(members)
}

impl CcFormula {
    pub fn and(a: CcFormula, b: CcFormula) -> Self {
        CcFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: CcFormula, b: CcFormula) -> Self {
        CcFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn neg(a: CcFormula) -> Self {
        CcFormula::Neg(Box::new(a))
    }

    /// `None` for an empty set.
    pub fn forall(members: Vec<CcFormula>) -> Option<Self> {
        canonical_set(members).map(CcFormula::Forall)
    }

    /// `None` for an empty set.
    pub fn exists(members: Vec<CcFormula>) -> Option<Self> {
        canonical_set(members).map(CcFormula::Exists)
    }

    pub fn is_prime(&self) -> bool {
        matches!(self, CcFormula::Prime(_))
    }

    pub fn is_quantifier(&self) -> bool {
        matches!(self, CcFormula::Forall(_) | CcFormula::Exists(_))
    }

    pub fn size(&self) -> usize {
        match self {
            CcFormula::Prime(_) => 1,
            CcFormula::And(a, b) | CcFormula::Or(a, b) => 1 + a.size() + b.size(),
            CcFormula::Neg(a) => 1 + a.size(),
            CcFormula::Forall(n) | CcFormula::Exists(n) => 1 + n.iter().map(CcFormula::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            CcFormula::Prime(_) => 0,
            CcFormula::And(a, b) | CcFormula::Or(a, b) => 1 + a.depth().max(b.depth()),
            CcFormula::Neg(a) => 1 + a.depth(),
            CcFormula::Forall(n) | CcFormula::Exists(n) => 1 + n.iter().map(CcFormula::depth).max().unwrap_or(0),
        }
    }

    /// Every subformula, the formula itself included, in pre-order.
    pub fn subformulas(&self) -> Vec<CcFormula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            out.push(f.clone());
            match f {
                CcFormula::Prime(_) => {}
                CcFormula::And(a, b) | CcFormula::Or(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                CcFormula::Neg(a) => stack.push(a),
                CcFormula::Forall(n) | CcFormula::Exists(n) => stack.extend(n.iter().rev()),
            }
        }
        out
    }

    /// Swaps `^`/`v` and `A`/`E`; primes stay, to be read over the dual base.
    pub fn dual(&self) -> CcFormula {
        match self {
            CcFormula::Prime(e) => CcFormula::Prime(*e),
            CcFormula::And(a, b) => CcFormula::or(a.dual(), b.dual()),
            CcFormula::Or(a, b) => CcFormula::and(a.dual(), b.dual()),
            CcFormula::Neg(a) => CcFormula::neg(a.dual()),
            CcFormula::Forall(n) => CcFormula::exists(n.iter().map(CcFormula::dual).collect()).expect("nonempty"),
            CcFormula::Exists(n) => CcFormula::forall(n.iter().map(CcFormula::dual).collect()).expect("nonempty"),
        }
    }

    /// `~` binds tightest, then `^`, then `v`; both binary operators
    /// associate to the left.
    pub fn parse(base: &PreorderedSet, text: &str) -> Result<Self, SyntaxError> {
        let toks = tokenize(text)?;
        let mut cur = Cursor::new(&toks, text.len());
        let f = parse_or(base, &mut cur)?;
        cur.finish()?;
        Ok(f)
    }

    pub fn display<'a>(&'a self, base: &'a PreorderedSet) -> impl fmt::Display + 'a {
        FormulaDisplay { f: self, base, prec: 0 }
    }

    fn prec(&self) -> u8 {
        match self {
            CcFormula::Or(..) => 1,
            CcFormula::And(..) => 2,
            _ => 3,
        }
    }
}

fn parse_or(base: &PreorderedSet, cur: &mut Cursor<'_>) -> Result<CcFormula, SyntaxError> {
    let mut f = parse_and(base, cur)?;
    while cur.eat(&Tok::Join) {
        f = CcFormula::or(f, parse_and(base, cur)?);
    }
    Ok(f)
}

fn parse_and(base: &PreorderedSet, cur: &mut Cursor<'_>) -> Result<CcFormula, SyntaxError> {
    let mut f = parse_unary(base, cur)?;
    while cur.eat(&Tok::Meet) {
        f = CcFormula::and(f, parse_unary(base, cur)?);
    }
    Ok(f)
}

fn parse_unary(base: &PreorderedSet, cur: &mut Cursor<'_>) -> Result<CcFormula, SyntaxError> {
    let offset = cur.offset();
    match cur.bump().cloned() {
        Some(Tok::Neg) => Ok(CcFormula::neg(parse_unary(base, cur)?)),
        Some(Tok::LParen) => {
            let f = parse_or(base, cur)?;
            cur.expect(&Tok::RParen, "`)`")?;
            Ok(f)
        }
        Some(Tok::Forall) => Ok(CcFormula::Forall(parse_set(base, cur, offset)?)),
        Some(Tok::Exists) => Ok(CcFormula::Exists(parse_set(base, cur, offset)?)),
        Some(Tok::Name(n)) => resolve_name(base, &n).map(CcFormula::Prime),
        _ => Err(SyntaxError::at(offset, "expected a formula")),
    }
}

fn parse_set(base: &PreorderedSet, cur: &mut Cursor<'_>, offset: usize) -> Result<Vec<CcFormula>, SyntaxError> {
    let mut members = Vec::new();
    if !cur.eat(&Tok::RBrace) {
        loop {
            members.push(parse_or(base, cur)?);
            if cur.eat(&Tok::RBrace) {
                break;
            }
            cur.expect(&Tok::Comma, "`,` or `}`")?;
        }
    }
    canonical_set(members).ok_or_else(|| SyntaxError::at(offset, "empty set"))
}

struct FormulaDisplay<'a> {
    f: &'a CcFormula,
    base: &'a PreorderedSet,
    /// Binding strength of the surrounding context.
    prec: u8,
}

impl FormulaDisplay<'_> {
    fn child<'b>(&self, f: &'b CcFormula, prec: u8) -> FormulaDisplay<'b>
    where
        Self: 'b,
    {
        FormulaDisplay { f, base: self.base, prec }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let own = self.f.prec();
        let wrap = own < 3 && own < self.prec;
        if wrap {
            f.write_str("(")?;
        }
        match self.f {
            CcFormula::Prime(e) => f.write_str(self.base.name(*e))?,
            CcFormula::And(a, b) => write!(f, "{} ^ {}", self.child(a, 2), self.child(b, 3))?,
            CcFormula::Or(a, b) => write!(f, "{} v {}", self.child(a, 1), self.child(b, 2))?,
            CcFormula::Neg(a) => write!(f, "~{}", self.child(a, 3))?,
            CcFormula::Forall(n) | CcFormula::Exists(n) => {
                f.write_str(if matches!(self.f, CcFormula::Forall(_)) { "A{" } else { "E{" })?;
                for (i, m) in n.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", self.child(m, 0))?;
                }
                f.write_str("}")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// `a1 ^ ... ^ am |- b1 v ... v bn`. Sides are kept normalized: no meet on
/// the left, no join on the right, no `1` on the left and no `0` on the
/// right. An empty left side stands for `1`, an empty right side for `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CcSequent {
    pub lhs: Vec<CcFormula>,
    pub rhs: Vec<CcFormula>,
}

/// Which side of a sequent.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl CcSequent {
    /// Normalizes both sides for the bounds of `base`; order is kept.
    pub fn new(
        base: &PreorderedSet,
        lhs: impl IntoIterator<Item = CcFormula>,
        rhs: impl IntoIterator<Item = CcFormula>,
    ) -> Self {
        let mut s = CcSequent {
            lhs: Vec::new(),
            rhs: Vec::new(),
        };
        for f in lhs {
            s.push(base, Side::Left, f);
        }
        for f in rhs {
            s.push(base, Side::Right, f);
        }
        s
    }

    /// Adds `f` on `side`, splitting meets (left) or joins (right) and
    /// dropping the unit of that side.
    pub fn push(&mut self, base: &PreorderedSet, side: Side, f: CcFormula) {
        match (side, f) {
            (Side::Left, CcFormula::And(a, b)) => {
                self.push(base, side, *a);
                self.push(base, side, *b);
            }
            (Side::Right, CcFormula::Or(a, b)) => {
                self.push(base, side, *a);
                self.push(base, side, *b);
            }
            (Side::Left, CcFormula::Prime(e)) if Some(e) == base.one() => {}
            (Side::Right, CcFormula::Prime(e)) if Some(e) == base.zero() => {}
            (Side::Left, f) => self.lhs.push(f),
            (Side::Right, f) => self.rhs.push(f),
        }
    }

    pub fn side(&self, side: Side) -> &Vec<CcFormula> {
        match side {
            Side::Left => &self.lhs,
            Side::Right => &self.rhs,
        }
    }

    pub fn side_mut(&mut self, side: Side) -> &mut Vec<CcFormula> {
        match side {
            Side::Left => &mut self.lhs,
            Side::Right => &mut self.rhs,
        }
    }

    /// Same sequent with both sides sorted.
    pub fn canonical(mut self) -> Self {
        self.lhs.sort();
        self.rhs.sort();
        self
    }

    pub fn is_canonical(&self) -> bool {
        self.lhs.windows(2).all(|w| w[0] <= w[1]) && self.rhs.windows(2).all(|w| w[0] <= w[1])
    }

    /// Equal up to the order of members.
    pub fn same_multisets(&self, other: &CcSequent) -> bool {
        self.clone().canonical() == other.clone().canonical()
    }

    pub fn is_prime(&self) -> bool {
        self.lhs.iter().chain(&self.rhs).all(CcFormula::is_prime)
    }

    /// Sides swapped and every formula dualized. Read over the dual base,
    /// where the bounds trade places.
    pub fn dual(&self, dual_base: &PreorderedSet) -> CcSequent {
        CcSequent::new(
            dual_base,
            self.rhs.iter().map(CcFormula::dual),
            self.lhs.iter().map(CcFormula::dual),
        )
    }

    /// Reads `a ^ b |- c v d`; either side may be empty.
    pub fn parse(base: &PreorderedSet, text: &str) -> Result<Self, SyntaxError> {
        let (l, r) = text
            .split_once("|-")
            .ok_or_else(|| SyntaxError::at(0, "expected `|-`"))?;
        let lhs = if l.trim().is_empty() {
            None
        } else {
            Some(CcFormula::parse(base, l)?)
        };
        let rhs = if r.trim().is_empty() {
            None
        } else {
            Some(CcFormula::parse(base, r).map_err(|e| shift(e, l.len() + 2))?)
        };
        Ok(CcSequent::new(base, lhs, rhs))
    }

    pub fn display<'a>(&'a self, base: &'a PreorderedSet) -> impl fmt::Display + 'a {
        SequentDisplay { s: self, base }
    }
}

struct SequentDisplay<'a> {
    s: &'a CcSequent,
    base: &'a PreorderedSet,
}

impl fmt::Display for SequentDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |f: &mut fmt::Formatter<'_>, items: &[CcFormula], sep: &str, prec: u8| -> fmt::Result {
            for (i, a) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(
                    f,
                    "{}",
                    FormulaDisplay {
                        f: a,
                        base: self.base,
                        prec
                    }
                )?;
            }
            Ok(())
        };
        show(f, &self.s.lhs, " ^ ", 2)?;
        if !self.s.lhs.is_empty() {
            f.write_str(" ")?;
        }
        f.write_str("|-")?;
        if !self.s.rhs.is_empty() {
            f.write_str(" ")?;
        }
        show(f, &self.s.rhs, " v ", 1)
    }
}

impl SequentText for CcSequent {
    const FLAVOR: &'static str = "cc";

    fn write(&self, base: &PreorderedSet) -> String {
        self.display(base).to_string()
    }

    fn read(base: &PreorderedSet, text: &str) -> Result<Self, SyntaxError> {
        CcSequent::parse(base, text)
    }
}
