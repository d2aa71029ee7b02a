#![allow(dead_code)]
//! Independent oracles and enumerators shared by the integration tests.
//! Nothing here calls a decision procedure of the library: orders are
//! enumerated by brute force and formulas are evaluated in the two-element
//! boolean algebra under monotone valuations.

use std::sync::Arc;

use freelat_core::cc::{CcFormula, CcSequent};
use freelat_core::distributive::LatticeTerm;
use freelat_core::order::{Elem, PreorderedSet};
use freelat_core::ortho::{OrthoFormula, Sequent};
use freelat_core::proof::{Derivation, RuleTag};

/// An order given as a dense matrix, `leq[a][b]` meaning `a <= b`.
pub type Matrix = Vec<Vec<bool>>;

/// Every labelled preorder on `n` points, found by testing every relation
/// for reflexivity and transitivity.
pub fn preorders(n: usize) -> Vec<Matrix> {
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << off.len()) {
        let mut m = vec![vec![false; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = true;
        }
        for (bit, &(a, b)) in off.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                m[a][b] = true;
            }
        }
        let transitive = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(m[a][b] && m[b][c]) || m[a][c])));
        if transitive {
            out.push(m);
        }
    }
    out
}

pub fn is_antisymmetric(m: &Matrix) -> bool {
    let n = m.len();
    (0..n).all(|a| (0..n).all(|b| a == b || !(m[a][b] && m[b][a])))
}

/// A base named `m0, m1, ...` carrying exactly the order `m`.
pub fn base_of(m: &Matrix) -> Arc<PreorderedSet> {
    let n = m.len();
    let names = (0..n).map(|i| format!("m{i}")).collect();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| m[a][b])
        .collect();
    Arc::new(PreorderedSet::new(names, edges, None).expect("distinct names"))
}

/// The order of `base` as a matrix.
pub fn matrix_of(base: &PreorderedSet) -> Matrix {
    let n = base.len();
    (0..n).map(|a| (0..n).map(|b| base.leq(Elem(a), Elem(b))).collect()).collect()
}

/// Every monotone map into `{0, 1}` that respects the declared bounds, as
/// vectors of truth values.
pub fn valuations(base: &PreorderedSet) -> Vec<Vec<bool>> {
    let m = matrix_of(base);
    let n = m.len();
    (0u32..(1 << n))
        .map(|mask| (0..n).map(|i| mask & (1 << i) != 0).collect::<Vec<bool>>())
        .filter(|v| (0..n).all(|a| (0..n).all(|b| !m[a][b] || !v[a] || v[b])))
        .filter(|v| base.zero().is_none_or(|z| !v[z.0]) && base.one().is_none_or(|o| v[o.0]))
        .collect()
}

/// Filter-valuation oracle for meet-words: `w1 <= w2` iff every up-set
/// containing all factors of `w1` contains all factors of `w2`.
pub fn word_leq(base: &PreorderedSet, w1: &[Elem], w2: &[Elem]) -> bool {
    valuations(base)
        .iter()
        .all(|v| !w1.iter().all(|e| v[e.0]) || w2.iter().all(|e| v[e.0]))
}

/// Every word of length `1..=max_len` over the elements of `base`.
pub fn words(n: usize, max_len: usize) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = Vec::new();
    let mut layer: Vec<Vec<Elem>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..n).map(move |i| {
                    let mut w = w.clone();
                    w.push(Elem(i));
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Every lattice term of depth at most `depth` over `n` atoms.
pub fn terms(n: usize, depth: usize) -> Vec<LatticeTerm> {
    let mut all: Vec<LatticeTerm> = (0..n).map(|i| LatticeTerm::Leaf(Elem(i))).collect();
    for _ in 0..depth {
        let mut next: Vec<LatticeTerm> = (0..n).map(|i| LatticeTerm::Leaf(Elem(i))).collect();
        for a in &all {
            for b in &all {
                next.push(LatticeTerm::meet(a.clone(), b.clone()));
                next.push(LatticeTerm::join(a.clone(), b.clone()));
            }
        }
        all = next;
    }
    all
}

pub fn eval_term(t: &LatticeTerm, v: &[bool]) -> bool {
    match t {
        LatticeTerm::Leaf(e) => v[e.0],
        LatticeTerm::Meet(a, b) => eval_term(a, v) && eval_term(b, v),
        LatticeTerm::Join(a, b) => eval_term(a, v) || eval_term(b, v),
    }
}

/// Truth table of a term over all `2^n` assignments, bit `mask` set iff the
/// term is true under `mask`.
pub fn truth_table(n: usize, f: impl Fn(&[bool]) -> bool) -> u64 {
    assert!(n <= 6);
    let mut table = 0u64;
    for mask in 0u32..(1 << n) {
        let v: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        if f(&v) {
            table |= 1 << mask;
        }
    }
    table
}

pub fn eval_ortho(f: &OrthoFormula, v: &[bool]) -> bool {
    match f {
        OrthoFormula::Prime(e) => v[e.0],
        OrthoFormula::Meet(a, b) => eval_ortho(a, v) && eval_ortho(b, v),
        OrthoFormula::Neg(a) => !eval_ortho(a, v),
    }
}

/// The ortho sequent holds in the two-element boolean algebra under every
/// monotone valuation.
pub fn ortho_valid(base: &PreorderedSet, s: &Sequent) -> bool {
    valuations(base)
        .iter()
        .all(|v| !s.lhs.iter().all(|f| eval_ortho(f, v)) || eval_ortho(&s.rhs, v))
}

pub fn eval_cc(f: &CcFormula, v: &[bool]) -> bool {
    match f {
        CcFormula::Prime(e) => v[e.0],
        CcFormula::And(a, b) => eval_cc(a, v) && eval_cc(b, v),
        CcFormula::Or(a, b) => eval_cc(a, v) || eval_cc(b, v),
        CcFormula::Neg(a) => !eval_cc(a, v),
        CcFormula::Forall(ms) => ms.iter().all(|m| eval_cc(m, v)),
        CcFormula::Exists(ms) => ms.iter().any(|m| eval_cc(m, v)),
    }
}

/// Classical validity of `lhs |- rhs` under every monotone valuation.
pub fn cc_valid(base: &PreorderedSet, s: &CcSequent) -> bool {
    valuations(base)
        .iter()
        .all(|v| !s.lhs.iter().all(|f| eval_cc(f, v)) || s.rhs.iter().any(|f| eval_cc(f, v)))
}

pub const SQUARE: &str = "elements 0 p q 1; order 0<p, 0<q, p<1, q<1; bounds 0 1";
pub const MAGNITUDE: &str = "elements one half third zero; chain zero<third<half<one; bounds zero one";
pub const THREE: &str = "elements 0 p 1; chain 0<p<1; bounds 0 1";

pub fn parse(text: &str) -> Arc<PreorderedSet> {
    Arc::new(freelat_core::order::parse_poset(text).expect("test poset parses"))
}

/// Every single-node mutation of `d` that differs from `d`. Each mutation
/// edits exactly one node: its rule tag, its side data, its premise list
/// or its conclusion.
pub fn mutations<S: Clone + PartialEq>(
    d: &Derivation<S>,
    rules: &[RuleTag],
    edit: impl Fn(&S) -> Vec<S>,
) -> Vec<Derivation<S>> {
    let mut out = Vec::new();
    for (path, node) in d.walk() {
        let mut variants: Vec<Derivation<S>> = Vec::new();
        for &r in rules.iter().filter(|&&r| r != node.rule) {
            let mut m = node.clone();
            m.rule = r;
            variants.push(m);
        }
        for i in 0..node.side.len() {
            let mut up = node.clone();
            up.side[i] += 1;
            variants.push(up);
            if node.side[i] > 0 {
                let mut down = node.clone();
                down.side[i] -= 1;
                variants.push(down);
            }
        }
        let mut extra = node.clone();
        extra.side.push(0);
        variants.push(extra);
        if !node.side.is_empty() {
            let mut bare = node.clone();
            bare.side.clear();
            variants.push(bare);
        }
        for i in 0..node.premises.len() {
            let mut m = node.clone();
            m.premises.remove(i);
            variants.push(m);
        }
        if let Some(first) = node.premises.first() {
            let mut m = node.clone();
            m.premises.push(first.clone());
            variants.push(m);
        }
        if node.premises.len() >= 2 {
            let mut m = node.clone();
            m.premises.swap(0, 1);
            variants.push(m);
        }
        for c in edit(&node.conclusion) {
            let mut m = node.clone();
            m.conclusion = c;
            variants.push(m);
        }
        for v in variants {
            if &v == node {
                continue;
            }
            let mut whole = d.clone();
            *whole.get_mut(&path).expect("walked path") = v;
            out.push(whole);
        }
    }
    out
}

fn bump_ortho(f: &OrthoFormula, n: usize) -> OrthoFormula {
    match f {
        OrthoFormula::Prime(e) => OrthoFormula::Prime(Elem((e.0 + 1) % n)),
        OrthoFormula::Meet(a, b) => OrthoFormula::meet(bump_ortho(a, n), (**b).clone()),
        OrthoFormula::Neg(a) => OrthoFormula::neg(bump_ortho(a, n)),
    }
}

/// Conclusion edits for ortho sequents.
pub fn ortho_edits(n: usize) -> impl Fn(&Sequent) -> Vec<Sequent> {
    move |s| {
        let mut out = vec![
            Sequent { lhs: s.lhs.clone(), rhs: OrthoFormula::neg(s.rhs.clone()) },
            Sequent { lhs: s.lhs.clone(), rhs: bump_ortho(&s.rhs, n) },
        ];
        if let Some(first) = s.lhs.first() {
            let mut lhs = s.lhs.clone();
            lhs[0] = bump_ortho(first, n);
            out.push(Sequent { lhs, rhs: s.rhs.clone() });
            out.push(Sequent { lhs: s.lhs[1..].to_vec(), rhs: s.rhs.clone() });
        }
        let mut lhs = s.lhs.clone();
        lhs.push(s.rhs.clone());
        out.push(Sequent { lhs, rhs: s.rhs.clone() });
        out
    }
}

fn bump_cc(f: &CcFormula, n: usize) -> CcFormula {
    match f {
        CcFormula::Prime(e) => CcFormula::Prime(Elem((e.0 + 1) % n)),
        CcFormula::And(a, b) => CcFormula::and(bump_cc(a, n), (**b).clone()),
        CcFormula::Or(a, b) => CcFormula::or(bump_cc(a, n), (**b).clone()),
        CcFormula::Neg(a) => CcFormula::neg(bump_cc(a, n)),
        CcFormula::Forall(ms) => {
            let mut ms = ms.clone();
            ms[0] = bump_cc(&ms[0], n);
            CcFormula::Forall(ms)
        }
        CcFormula::Exists(ms) => {
            let mut ms = ms.clone();
            ms[0] = bump_cc(&ms[0], n);
            CcFormula::Exists(ms)
        }
    }
}

/// Conclusion edits for cc sequents.
pub fn cc_edits(n: usize) -> impl Fn(&CcSequent) -> Vec<CcSequent> {
    move |s| {
        let mut out = vec![CcSequent { lhs: s.rhs.clone(), rhs: s.lhs.clone() }];
        for (side, other) in [(&s.lhs, &s.rhs), (&s.rhs, &s.lhs)] {
            let rebuild = |new: Vec<CcFormula>| {
                if std::ptr::eq(side, &s.lhs) {
                    CcSequent { lhs: new, rhs: other.clone() }
                } else {
                    CcSequent { lhs: other.clone(), rhs: new }
                }
            };
            if let Some(first) = side.first() {
                let mut v = side.clone();
                v[0] = bump_cc(first, n);
                out.push(rebuild(v));
                out.push(rebuild(side[1..].to_vec()));
                let mut v = side.clone();
                v[0] = CcFormula::neg(first.clone());
                out.push(rebuild(v));
                let mut v = side.clone();
                v.push(first.clone());
                out.push(rebuild(v));
            }
        }
        out
    }
}

pub const ORTHO_RULES: [RuleTag; 6] = [
    RuleTag::Prime,
    RuleTag::Struct,
    RuleTag::R31,
    RuleTag::R32,
    RuleTag::R33,
    RuleTag::R34,
];

/// Rules of the cc calculus, including the structure rule it shares.
pub fn cc_rules() -> Vec<RuleTag> {
    let mut rules: Vec<RuleTag> = RuleTag::ALL.iter().copied().filter(|r| !r.is_ortho()).collect();
    rules.push(RuleTag::Struct);
    rules
}

/// Which calculus a golden derivation belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Flavor {
    Ortho,
    /// The cc calculus with or without contraction.
    Cc { contraction: bool },
}

pub struct GoldenCase {
    pub name: &'static str,
    pub poset: &'static str,
    pub flavor: Flavor,
    pub query: &'static str,
}

const CC_ON: Flavor = Flavor::Cc { contraction: true };
const CC_OFF: Flavor = Flavor::Cc { contraction: false };

/// The golden derivation corpus; each file lives in `tests/golden/`.
pub const GOLDEN: &[GoldenCase] = &[
    GoldenCase { name: "ortho_double_negation", poset: SQUARE, flavor: Flavor::Ortho, query: "p |- ~~p" },
    GoldenCase { name: "ortho_contradiction", poset: SQUARE, flavor: Flavor::Ortho, query: "p ^ ~p |- 0" },
    GoldenCase { name: "ortho_antitone", poset: SQUARE, flavor: Flavor::Ortho, query: "~p |- ~(p ^ q)" },
    GoldenCase { name: "ortho_meet", poset: SQUARE, flavor: Flavor::Ortho, query: "p ^ q |- q ^ ~~p" },
    GoldenCase { name: "ortho_chain", poset: MAGNITUDE, flavor: Flavor::Ortho, query: "third ^ ~half |- zero" },
    GoldenCase { name: "cc_de_morgan", poset: SQUARE, flavor: CC_ON, query: "~(p ^ q) |- ~p v ~q" },
    GoldenCase { name: "cc_excluded_middle", poset: SQUARE, flavor: CC_OFF, query: "|- p v ~p" },
    GoldenCase { name: "cc_distribute", poset: SQUARE, flavor: CC_OFF, query: "p ^ (q v ~q) |- p ^ q v p ^ ~q" },
    GoldenCase { name: "cc_quantifiers", poset: MAGNITUDE, flavor: CC_OFF, query: "A{half, third} |- E{third, one}" },
    GoldenCase { name: "cc_doubled", poset: MAGNITUDE, flavor: CC_OFF, query: "A{one, half, third, ~A{one, half, third}} ^ A{one, half, third, ~A{one, half, third}} |-" },
    GoldenCase { name: "cc_contracted", poset: MAGNITUDE, flavor: CC_ON, query: "A{one, half, third, ~A{one, half, third}} |-" },
];

pub fn golden_path(name: &str) -> std::path::PathBuf {
    std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.proof"))
}

pub fn cc_options(contraction: bool) -> freelat_core::cc::CcOptions {
    freelat_core::cc::CcOptions { contraction, ..Default::default() }
}

/// Single-node mutations of a golden document, split into those the
/// checker rejects and those it accepts. Accepted mutants are returned as
/// whether their conclusion is valid under the two-element oracle.
pub fn mutation_outcome(case: &GoldenCase, text: &str) -> (usize, Vec<bool>) {
    use freelat_core::cc::CcEngine;
    use freelat_core::ortho::OrthoEngine;
    use freelat_core::proof::deserialize;
    let base = parse(case.poset);
    let n = base.len();
    let mut rejected = 0;
    let mut accepted = Vec::new();
    match case.flavor {
        Flavor::Ortho => {
            let e = OrthoEngine::free(base.clone()).unwrap();
            let d = deserialize::<Sequent>(text, &base).unwrap();
            for m in mutations(&d, &ORTHO_RULES, ortho_edits(n)) {
                match e.check(&m) {
                    Ok(()) => accepted.push(ortho_valid(&base, &m.conclusion)),
                    Err(_) => rejected += 1,
                }
            }
        }
        Flavor::Cc { contraction } => {
            let e = CcEngine::free(base.clone()).unwrap();
            let options = cc_options(contraction);
            let d = deserialize::<CcSequent>(text, &base).unwrap();
            for m in mutations(&d, &cc_rules(), cc_edits(n)) {
                match e.check(&m, &options) {
                    Ok(()) => accepted.push(cc_valid(&base, &m.conclusion)),
                    Err(_) => rejected += 1,
                }
            }
        }
    }
    (rejected, accepted)
}
