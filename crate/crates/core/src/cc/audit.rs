//! Randomized audits of the admissible rules of the boolean calculus.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::order::Elem;

use super::engine::CcEngine;
use super::formula::{CcFormula, CcSequent};
use super::CcOptions;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum CcLemma {
    /// `a1 <= c v b1, a2 ^ c <= b2 => a1 ^ a2 <= b1 v b2`
    Cut,
    /// `a <= (b1 ^ b2) v c => a <= b1 v c` and `a <= b2 v c`
    MeetInversion,
    /// `(a1 v a2) ^ c <= b => a1 ^ c <= b` and `a2 ^ c <= b`
    JoinInversion,
    /// `x in N, a <= b v A{N} => a <= b v x`
    ForallInversion,
    /// `x in N, a ^ E{N} <= b => a ^ x <= b`
    ExistsInversion,
    /// `a <= ~b v c => a ^ b <= c`
    NegRightShift,
    /// `a ^ ~b <= c => a <= b v c`
    NegLeftShift,
    /// `a <= 0 => a <= b`
    FromZero,
    /// `1 <= b => a <= b`
    FromOne,
    /// `s` derivable iff its dual is, over the dual base.
    Duality,
    /// Derivability survives adding members on either side.
    Monotone,
}

impl CcLemma {
    pub const ALL: [CcLemma; 11] = [
        CcLemma::Cut,
        CcLemma::MeetInversion,
        CcLemma::JoinInversion,
        CcLemma::ForallInversion,
        CcLemma::ExistsInversion,
        CcLemma::NegRightShift,
        CcLemma::NegLeftShift,
        CcLemma::FromZero,
        CcLemma::FromOne,
        CcLemma::Duality,
        CcLemma::Monotone,
    ];

    pub fn id(self) -> &'static str {
        match self {
            CcLemma::Cut => "cut",
            CcLemma::MeetInversion => "meet-inversion",
            CcLemma::JoinInversion => "join-inversion",
            CcLemma::ForallInversion => "forall-inversion",
            CcLemma::ExistsInversion => "exists-inversion",
            CcLemma::NegRightShift => "neg-right-shift",
            CcLemma::NegLeftShift => "neg-left-shift",
            CcLemma::FromZero => "from-zero",
            CcLemma::FromOne => "from-one",
            CcLemma::Duality => "duality",
            CcLemma::Monotone => "monotone",
        }
    }
}

impl fmt::Display for CcLemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CcLemma {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CcLemma::ALL
            .into_iter()
            .find(|l| l.id() == s)
            .ok_or_else(|| format!("unknown cc lemma `{s}`"))
    }
}

#[derive(Clone, Debug)]
pub struct CcAuditConfig {
    pub samples: usize,
    pub seed: u64,
    pub depth: usize,
    /// Largest set size inside `A{..}` and `E{..}`.
    pub max_set: usize,
    pub options: CcOptions,
}

impl Default for CcAuditConfig {
    fn default() -> Self {
        CcAuditConfig {
            samples: 300,
            seed: 0,
            depth: 3,
            max_set: 2,
            options: CcOptions {
                budget: 200_000,
                ..CcOptions::default()
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CcAuditReport {
    pub lemma: CcLemma,
    pub samples: usize,
    pub applicable: usize,
    pub inconclusive: usize,
    pub violations: Vec<String>,
}

impl CcAuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Seeded generator of random formulas with finite sets.
pub struct CcGen {
    rng: ChaCha8Rng,
    atoms: Vec<Elem>,
    max_set: usize,
}

impl CcGen {
    pub fn new(atoms: Vec<Elem>, max_set: usize, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        CcGen {
            rng,
            atoms,
            max_set: max_set.max(1),
        }
    }

    pub fn atom(&mut self) -> CcFormula {
        CcFormula::Prime(*self.atoms.choose(&mut self.rng).expect("nonempty base"))
    }

    pub fn formula(&mut self, depth: usize) -> CcFormula {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return self.atom();
        }
        let d = depth - 1;
        match self.rng.gen_range(0..5) {
            0 => CcFormula::and(self.formula(d), self.formula(d)),
            1 => CcFormula::or(self.formula(d), self.formula(d)),
            2 => CcFormula::neg(self.formula(d)),
            k => {
                let n = self.rng.gen_range(1..=self.max_set);
                let members = (0..n).map(|_| self.formula(d)).collect();
                if k == 3 {
                    CcFormula::forall(members).expect("nonempty")
                } else {
                    CcFormula::exists(members).expect("nonempty")
                }
            }
        }
    }

    /// Half of the time a subformula of `pool`, otherwise a fresh formula.
    pub fn related(&mut self, pool: &[CcFormula], depth: usize) -> CcFormula {
        let subs: Vec<CcFormula> = pool
            .iter()
            .flat_map(CcFormula::subformulas)
            .filter(|f| f.depth() <= depth)
            .collect();
        if subs.is_empty() || self.rng.gen_bool(0.5) {
            self.formula(depth)
        } else {
            subs.choose(&mut self.rng).expect("nonempty").clone()
        }
    }

    /// Zero to two formulas.
    pub fn context(&mut self, depth: usize) -> Vec<CcFormula> {
        let n = self.rng.gen_range(0..=2);
        (0..n).map(|_| self.formula(depth)).collect()
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn set(&mut self, depth: usize, pool: &[CcFormula]) -> Vec<CcFormula> {
        let n = self.rng.gen_range(1..=self.max_set);
        let mut members: Vec<CcFormula> = (0..n).map(|_| self.related(pool, depth)).collect();
        members.sort();
        members.dedup();
        members
    }
}

struct Instance {
    premises: Vec<CcSequent>,
    conclusions: Vec<CcSequent>,
}

fn cat(parts: &[&[CcFormula]]) -> Vec<CcFormula> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

fn instance(engine: &CcEngine, lemma: CcLemma, g: &mut CcGen, depth: usize) -> Instance {
    let base = engine.base();
    let seq = |l: Vec<CcFormula>, r: Vec<CcFormula>| CcSequent::new(base, l, r);
    let zero = CcFormula::Prime(base.zero().expect("bounded"));
    let one = CcFormula::Prime(base.one().expect("bounded"));
    let sub = depth.saturating_sub(1);
    match lemma {
        CcLemma::Cut => {
            let a1 = g.context(depth);
            let a2 = g.context(depth);
            let b1 = g.context(sub);
            let b2 = g.context(sub);
            let c = g.related(&a1, depth);
            Instance {
                premises: vec![
                    seq(a1.clone(), cat(&[std::slice::from_ref(&c), &b1])),
                    seq(cat(&[&a2, &[c]]), b2.clone()),
                ],
                conclusions: vec![seq(cat(&[&a1, &a2]), cat(&[&b1, &b2]))],
            }
        }
        CcLemma::MeetInversion => {
            let a = g.context(depth);
            let b1 = g.related(&a, sub);
            let b2 = g.related(&a, sub);
            let c = g.context(sub);
            Instance {
                premises: vec![seq(a.clone(), cat(&[&[CcFormula::and(b1.clone(), b2.clone())], &c]))],
                conclusions: vec![seq(a.clone(), cat(&[&[b1], &c])), seq(a, cat(&[&[b2], &c]))],
            }
        }
        CcLemma::JoinInversion => {
            let b = g.context(depth);
            let a1 = g.related(&b, sub);
            let a2 = g.related(&b, sub);
            let c = g.context(sub);
            Instance {
                premises: vec![seq(cat(&[&[CcFormula::or(a1.clone(), a2.clone())], &c]), b.clone())],
                conclusions: vec![seq(cat(&[&[a1], &c]), b.clone()), seq(cat(&[&[a2], &c]), b)],
            }
        }
        CcLemma::ForallInversion => {
            let a = g.context(depth);
            let b = g.context(sub);
            let n = g.set(sub, &a);
            let x = n[g.index(n.len())].clone();
            let all = CcFormula::forall(n).expect("nonempty");
            Instance {
                premises: vec![seq(a.clone(), cat(&[&b, &[all]]))],
                conclusions: vec![seq(a, cat(&[&b, &[x]]))],
            }
        }
        CcLemma::ExistsInversion => {
            let b = g.context(depth);
            let a = g.context(sub);
            let n = g.set(sub, &b);
            let x = n[g.index(n.len())].clone();
            let some = CcFormula::exists(n).expect("nonempty");
            Instance {
                premises: vec![seq(cat(&[&a, &[some]]), b.clone())],
                conclusions: vec![seq(cat(&[&a, &[x]]), b)],
            }
        }
        CcLemma::NegRightShift => {
            let a = g.context(depth);
            let b = g.related(&a, sub);
            let c = g.context(sub);
            Instance {
                premises: vec![seq(a.clone(), cat(&[&[CcFormula::neg(b.clone())], &c]))],
                conclusions: vec![seq(cat(&[&a, &[b]]), c)],
            }
        }
        CcLemma::NegLeftShift => {
            let a = g.context(depth);
            let b = g.related(&a, sub);
            let c = g.context(sub);
            Instance {
                premises: vec![seq(cat(&[&a, &[CcFormula::neg(b.clone())]]), c.clone())],
                conclusions: vec![seq(a, cat(&[&[b], &c]))],
            }
        }
        CcLemma::FromZero => {
            let a = g.context(depth);
            let b = g.related(&a, depth);
            Instance {
                premises: vec![seq(a.clone(), vec![zero])],
                conclusions: vec![seq(a, vec![b])],
            }
        }
        CcLemma::FromOne => {
            let b = g.formula(depth);
            let a = g.related(std::slice::from_ref(&b), depth);
            Instance {
                premises: vec![seq(vec![one], vec![b.clone()])],
                conclusions: vec![seq(vec![a], vec![b])],
            }
        }
        CcLemma::Duality | CcLemma::Monotone => {
            let a = g.context(depth);
            let mut b = g.context(depth);
            if b.is_empty() {
                b.push(g.related(&a, depth));
            }
            let extra_l = g.context(sub);
            let extra_r = g.context(sub);
            Instance {
                premises: vec![seq(a.clone(), b.clone())],
                conclusions: vec![seq(cat(&[&a, &extra_l]), cat(&[&b, &extra_r]))],
            }
        }
    }
}

enum Sample {
    Skipped,
    Held,
    Inconclusive,
    Violated(String),
}

fn run_sample(engine: &CcEngine, dual: &CcEngine, lemma: CcLemma, config: &CcAuditConfig, i: usize) -> Sample {
    let atoms: Vec<Elem> = engine.base().elements().collect();
    let mut g = CcGen::new(atoms, config.max_set, config.seed, i as u64);
    let inst = instance(engine, lemma, &mut g, config.depth.max(1));
    let base = engine.base();
    let opts = &config.options;
    if lemma == CcLemma::Duality {
        let s = &inst.premises[0];
        let d = s.dual(dual.base());
        return match (engine.decide(s, opts), dual.decide(&d, opts)) {
            (Some(x), Some(y)) if x == y => Sample::Held,
            (Some(x), Some(y)) => Sample::Violated(format!(
                "{} is {x} but its dual {} is {y}",
                s.display(base),
                d.display(dual.base())
            )),
            _ => Sample::Inconclusive,
        };
    }
    for p in &inst.premises {
        match engine.decide(p, opts) {
            None => return Sample::Inconclusive,
            Some(false) => return Sample::Skipped,
            Some(true) => {}
        }
    }
    for c in &inst.conclusions {
        match engine.decide(c, opts) {
            None => return Sample::Inconclusive,
            Some(true) => {}
            Some(false) => {
                let premises: Vec<String> = inst.premises.iter().map(|p| p.display(base).to_string()).collect();
                return Sample::Violated(format!(
                    "premises [{}] but not {}",
                    premises.join("; "),
                    c.display(base)
                ));
            }
        }
    }
    Sample::Held
}

/// Audits one admissible rule of the boolean calculus.
pub fn cc_audit(engine: &CcEngine, lemma: CcLemma, config: &CcAuditConfig) -> CcAuditReport {
    let dual = engine.dual();
    let results: Vec<Sample> = (0..config.samples)
        .into_par_iter()
        .map(|i| run_sample(engine, &dual, lemma, config, i))
        .collect();
    let mut report = CcAuditReport {
        lemma,
        samples: config.samples,
        applicable: 0,
        inconclusive: 0,
        violations: Vec::new(),
    };
    for r in results {
        match r {
            Sample::Skipped => {}
            Sample::Held => report.applicable += 1,
            Sample::Inconclusive => report.inconclusive += 1,
            Sample::Violated(w) => {
                report.applicable += 1;
                report.violations.push(w);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::order::PreorderedSet;

    #[test]
    fn small_audits_are_clean() {
        let e = CcEngine::free(Arc::new(PreorderedSet::bounded_antichain(&["p", "q"]))).unwrap();
        let config = CcAuditConfig {
            samples: 40,
            seed: 5,
            depth: 2,
            ..CcAuditConfig::default()
        };
        for lemma in CcLemma::ALL {
            let r = cc_audit(&e, lemma, &config);
            assert!(r.is_clean(), "{lemma}: {:?}", r.violations);
            assert_eq!(r.inconclusive, 0, "{lemma}");
        }
    }

    #[test]
    fn lemma_ids_round_trip() {
        for l in CcLemma::ALL {
            assert_eq!(l.id().parse::<CcLemma>(), Ok(l));
        }
    }
}
