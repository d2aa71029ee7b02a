use std::fmt;

use crate::error::SyntaxError;
use crate::order::{Elem, PreorderedSet};
use crate::proof::SequentText;
use crate::syntax::{tokenize, Cursor, Tok};

/// A formula built from base elements with `^` and `~`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrthoFormula {
    Prime(Elem),
    Meet(Box<OrthoFormula>, Box<OrthoFormula>),
    Neg(Box<OrthoFormula>),
}

impl OrthoFormula {
    pub fn meet(a: OrthoFormula, b: OrthoFormula) -> Self {
        OrthoFormula::Meet(Box::new(a), Box::new(b))
    }

    pub fn neg(a: OrthoFormula) -> Self {
        OrthoFormula::Neg(Box::new(a))
    }

    /// Left-associated meet of a nonempty list.
    pub fn meet_all(items: impl IntoIterator<Item = OrthoFormula>) -> Option<Self> {
        items.into_iter().reduce(OrthoFormula::meet)
    }

    pub fn is_prime(&self) -> bool {
        matches!(self, OrthoFormula::Prime(_))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            OrthoFormula::Prime(_) => 1,
            OrthoFormula::Meet(a, b) => 1 + a.size() + b.size(),
            OrthoFormula::Neg(a) => 1 + a.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            OrthoFormula::Prime(_) => 0,
            OrthoFormula::Meet(a, b) => 1 + a.depth().max(b.depth()),
            OrthoFormula::Neg(a) => 1 + a.depth(),
        }
    }

    /// Conjuncts after removing every meet at the top.
    pub fn conjuncts(&self) -> Vec<OrthoFormula> {
        let mut out = Vec::new();
        self.push_conjuncts(&mut out);
        out
    }

    fn push_conjuncts(&self, out: &mut Vec<OrthoFormula>) {
        match self {
            OrthoFormula::Meet(a, b) => {
                a.push_conjuncts(out);
                b.push_conjuncts(out);
            }
            f => out.push(f.clone()),
        }
    }

    /// Every subformula, the formula itself included, in pre-order.
    pub fn subformulas(&self) -> Vec<OrthoFormula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            out.push(f.clone());
            match f {
                OrthoFormula::Prime(_) => {}
                OrthoFormula::Meet(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                OrthoFormula::Neg(a) => stack.push(a),
            }
        }
        out
    }

    /// `~` binds tightest, `^` associates to the left. The literals `0` and
    /// `1` name the declared bounds when no element carries those names.
    pub fn parse(base: &PreorderedSet, text: &str) -> Result<Self, SyntaxError> {
        let toks = tokenize(text)?;
        let mut cur = Cursor::new(&toks, text.len());
        let f = parse_meet(base, &mut cur)?;
        cur.finish()?;
        Ok(f)
    }

    pub fn display<'a>(&'a self, base: &'a PreorderedSet) -> impl fmt::Display + 'a {
        FormulaDisplay { f: self, base }
    }
}

pub(crate) fn resolve_name(base: &PreorderedSet, name: &str) -> Result<Elem, SyntaxError> {
    if let Some(e) = base.lookup(name) {
        return Ok(e);
    }
    match name {
        "0" => base.zero().ok_or(SyntaxError::MissingBound("0")),
        "1" => base.one().ok_or(SyntaxError::MissingBound("1")),
        _ => Err(SyntaxError::UnknownElement(name.to_string())),
    }
}

fn parse_meet(base: &PreorderedSet, cur: &mut Cursor<'_>) -> Result<OrthoFormula, SyntaxError> {
    let mut f = parse_unary(base, cur)?;
    while cur.eat(&Tok::Meet) {
        f = OrthoFormula::meet(f, parse_unary(base, cur)?);
    }
    Ok(f)
}

fn parse_unary(base: &PreorderedSet, cur: &mut Cursor<'_>) -> Result<OrthoFormula, SyntaxError> {
    let offset = cur.offset();
    match cur.bump().cloned() {
        Some(Tok::Neg) => Ok(OrthoFormula::neg(parse_unary(base, cur)?)),
        Some(Tok::LParen) => {
            let f = parse_meet(base, cur)?;
            cur.expect(&Tok::RParen, "`)`")?;
            Ok(f)
        }
        Some(Tok::Name(n)) => resolve_name(base, &n).map(OrthoFormula::Prime),
        _ => Err(SyntaxError::at(offset, "expected a formula")),
    }
}

struct FormulaDisplay<'a> {
    f: &'a OrthoFormula,
    base: &'a PreorderedSet,
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = self.base;
        match self.f {
            OrthoFormula::Prime(e) => f.write_str(base.name(*e)),
            OrthoFormula::Meet(a, b) => {
                write!(f, "{} ^ ", a.display(base))?;
                if matches!(**b, OrthoFormula::Meet(..)) {
                    write!(f, "({})", b.display(base))
                } else {
                    write!(f, "{}", b.display(base))
                }
            }
            OrthoFormula::Neg(a) => {
                if matches!(**a, OrthoFormula::Meet(..)) {
                    write!(f, "~({})", a.display(base))
                } else {
                    write!(f, "~{}", a.display(base))
                }
            }
        }
    }
}

/// `a1 ^ ... ^ an |- b`. The left side is kept as a list of conjuncts, none
/// of them a meet; the empty list stands for `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub lhs: Vec<OrthoFormula>,
    pub rhs: OrthoFormula,
}

impl Sequent {
    /// Flattens every meet on the left; the order of conjuncts is kept.
    pub fn new(lhs: impl IntoIterator<Item = OrthoFormula>, rhs: OrthoFormula) -> Self {
        let lhs = lhs.into_iter().flat_map(|f| f.conjuncts()).collect();
        Sequent { lhs, rhs }
    }

    /// The sequent `a |- b`.
    pub fn pair(a: &OrthoFormula, b: &OrthoFormula) -> Self {
        Sequent::new([a.clone()], b.clone())
    }

    /// Same sequent with the left side sorted.
    pub fn canonical(mut self) -> Self {
        self.lhs.sort();
        self
    }

    pub fn is_canonical(&self) -> bool {
        self.lhs.windows(2).all(|w| w[0] <= w[1])
    }

    /// Total size of both sides.
    pub fn weight(&self) -> usize {
        self.lhs.iter().map(OrthoFormula::size).sum::<usize>() + self.rhs.size()
    }

    pub fn is_prime(&self) -> bool {
        self.rhs.is_prime() && self.lhs.iter().all(OrthoFormula::is_prime)
    }

    /// Left side with position `i` removed.
    pub fn without(&self, i: usize) -> Vec<OrthoFormula> {
        let mut lhs = self.lhs.clone();
        lhs.remove(i);
        lhs
    }

    /// Reads `a ^ ~b |- c`; an empty left side denotes `1`.
    pub fn parse(base: &PreorderedSet, text: &str) -> Result<Self, SyntaxError> {
        let (l, r) = text
            .split_once("|-")
            .ok_or_else(|| SyntaxError::at(0, "expected `|-`"))?;
        let rhs = OrthoFormula::parse(base, r).map_err(|e| shift(e, l.len() + 2))?;
        if l.trim().is_empty() {
            return Ok(Sequent { lhs: Vec::new(), rhs });
        }
        let lhs = OrthoFormula::parse(base, l)?;
        Ok(Sequent::new([lhs], rhs))
    }

    pub fn display<'a>(&'a self, base: &'a PreorderedSet) -> impl fmt::Display + 'a {
        SequentDisplay { s: self, base }
    }
}

pub(crate) fn shift(e: SyntaxError, by: usize) -> SyntaxError {
    match e {
        SyntaxError::Parse { offset, message } => SyntaxError::Parse {
            offset: offset + by,
            message,
        },
        other => other,
    }
}

struct SequentDisplay<'a> {
    s: &'a Sequent,
    base: &'a PreorderedSet,
}

impl fmt::Display for SequentDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.s.lhs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ^ ")?;
            }
            write!(f, "{}", a.display(self.base))?;
        }
        if !self.s.lhs.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "|- {}", self.s.rhs.display(self.base))
    }
}

impl SequentText for Sequent {
    const FLAVOR: &'static str = "ortho";

    fn write(&self, base: &PreorderedSet) -> String {
        self.display(base).to_string()
    }

    fn read(base: &PreorderedSet, text: &str) -> Result<Self, SyntaxError> {
        Sequent::parse(base, text)
    }
}
