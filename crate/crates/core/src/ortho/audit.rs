//! Randomized audits of the admissible rules of the ortho calculus.
//!
//! Each audit draws instances, keeps those whose premises are derivable and
//! checks that the conclusion is derivable too. Sample `i` uses its own
//! stream of a seeded generator, so reports do not depend on scheduling.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::order::Elem;

use super::engine::{DeriveOutcome, OrthoEngine};
use super::formula::{OrthoFormula, Sequent};
use super::model::{compatible_assignments, ortho_models, sequent_holds};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Lemma {
    /// `c <= c`
    Reflexive,
    /// `0 <= c <= 1`
    Bounds,
    /// `a <= c, c <= b => a <= b`
    Transitive,
    /// `a <= b1 ^ b2 => a <= b1`
    MeetLeft,
    /// `a <= b1 ^ b2 => a <= b2`
    MeetRight,
    /// `a <= ~b => a ^ b <= 0`
    NegInversion,
    /// `a ^ ~(~c ^ d) <= b => a ^ c <= b`
    DoubleNegation,
    /// `a ^ ~c <= p => a <= p or a ^ ~c <= 0`, `p` prime
    PrimeSplit,
    /// `a ^ c ^ c <= b => a ^ c <= b`
    Contraction,
    /// `a1 <= c, a2 ^ c <= b => a1 ^ a2 <= b`
    Cut,
}

impl Lemma {
    pub const ALL: [Lemma; 10] = [
        Lemma::Reflexive,
        Lemma::Bounds,
        Lemma::Transitive,
        Lemma::MeetLeft,
        Lemma::MeetRight,
        Lemma::NegInversion,
        Lemma::DoubleNegation,
        Lemma::PrimeSplit,
        Lemma::Contraction,
        Lemma::Cut,
    ];

    /// Short identifier used on the command line.
    pub fn id(self) -> &'static str {
        match self {
            Lemma::Reflexive => "reflexive",
            Lemma::Bounds => "bounds",
            Lemma::Transitive => "transitive",
            Lemma::MeetLeft => "meet-left",
            Lemma::MeetRight => "meet-right",
            Lemma::NegInversion => "neg-inversion",
            Lemma::DoubleNegation => "double-negation",
            Lemma::PrimeSplit => "prime-split",
            Lemma::Contraction => "contraction",
            Lemma::Cut => "cut",
        }
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Lemma {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.id() == s)
            .ok_or_else(|| {
                let ids: Vec<&str> = Lemma::ALL.iter().map(|l| l.id()).collect();
                format!("unknown lemma `{s}`; expected one of {}", ids.join(" "))
            })
    }
}

/// How derivability is settled inside an audit.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// The focused decider. Relies on the inversion lemmas.
    Focused,
    /// Unrestricted search over every rule, so no lemma is presupposed.
    Exhaustive,
}

#[derive(Clone, Debug)]
pub struct AuditConfig {
    pub samples: usize,
    pub seed: u64,
    pub depth: usize,
    pub budget: usize,
    pub strategy: Strategy,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            samples: 500,
            seed: 0,
            depth: 4,
            budget: 200_000,
            strategy: Strategy::Exhaustive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub lemma: Lemma,
    pub samples: usize,
    /// Instances whose premises were derivable.
    pub applicable: usize,
    /// Instances where a query ran out of budget.
    pub inconclusive: usize,
    /// The failing instances, rendered as text.
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

enum Sample {
    Skipped,
    Held,
    Inconclusive,
    Violated(String),
}

struct Oracle<'a> {
    engine: &'a OrthoEngine,
    strategy: Strategy,
    budget: usize,
}

impl Oracle<'_> {
    fn holds(&self, s: &Sequent) -> Option<bool> {
        match self.strategy {
            Strategy::Focused => Some(self.engine.decide_sequent(s).derivable),
            Strategy::Exhaustive => match self.engine.derive(s, self.budget) {
                DeriveOutcome::Proved { .. } => Some(true),
                DeriveOutcome::Refuted(_) => Some(false),
                DeriveOutcome::Exhausted { .. } => None,
            },
        }
    }
}

/// Seeded generator of random formulas over a fixed set of atoms.
pub struct FormulaGen {
    rng: ChaCha8Rng,
    atoms: Vec<Elem>,
}

impl FormulaGen {
    pub fn new(atoms: Vec<Elem>, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        FormulaGen { rng, atoms }
    }

    pub fn atom(&mut self) -> OrthoFormula {
        OrthoFormula::Prime(*self.atoms.choose(&mut self.rng).expect("nonempty base"))
    }

    /// Formula of depth at most `depth`.
    pub fn formula(&mut self, depth: usize) -> OrthoFormula {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return self.atom();
        }
        if self.rng.gen_bool(0.5) {
            OrthoFormula::neg(self.formula(depth - 1))
        } else {
            OrthoFormula::meet(self.formula(depth - 1), self.formula(depth - 1))
        }
    }

    /// Half of the time a subformula of one of `pool` (possibly negated),
    /// otherwise a fresh formula. Sharing material raises the share of
    /// instances whose premises hold.
    pub fn related(&mut self, pool: &[OrthoFormula], depth: usize) -> OrthoFormula {
        let subs: Vec<OrthoFormula> = pool
            .iter()
            .flat_map(|f| f.subformulas())
            .filter(|f| f.depth() <= depth)
            .collect();
        if subs.is_empty() || self.rng.gen_bool(0.5) {
            return self.formula(depth);
        }
        let f = subs.choose(&mut self.rng).expect("nonempty").clone();
        if f.depth() < depth && self.rng.gen_bool(0.25) {
            OrthoFormula::neg(f)
        } else {
            f
        }
    }

    /// Context list of zero to two formulas; the empty list stands for `1`.
    pub fn context(&mut self, depth: usize) -> Vec<OrthoFormula> {
        let n = self.rng.gen_range(0..=2);
        (0..n).map(|_| self.formula(depth)).collect()
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }
}

fn seq(lhs: &[&[OrthoFormula]], rhs: OrthoFormula) -> Sequent {
    Sequent::new(lhs.iter().flat_map(|l| l.iter().cloned()), rhs)
}

/// Premises and conclusions of one instance. The bounds lemma needs every
/// conclusion, the prime split lemma any one of its two.
struct Instance {
    premises: Vec<Sequent>,
    conclusions: Vec<Sequent>,
}

fn instance(engine: &OrthoEngine, lemma: Lemma, g: &mut FormulaGen, depth: usize) -> Instance {
    let zero = engine.zero();
    let one = engine.one();
    match lemma {
        Lemma::Reflexive => {
            let c = g.formula(depth);
            Instance {
                premises: vec![],
                conclusions: vec![Sequent::pair(&c, &c)],
            }
        }
        Lemma::Bounds => {
            let c = g.formula(depth);
            Instance {
                premises: vec![],
                conclusions: vec![Sequent::pair(&zero, &c), Sequent::pair(&c, &one)],
            }
        }
        Lemma::Transitive => {
            let a = g.context(depth);
            let c = g.related(&a, depth);
            let b = g.related(std::slice::from_ref(&c), depth);
            Instance {
                premises: vec![seq(&[&a], c.clone()), seq(&[&[c]], b.clone())],
                conclusions: vec![seq(&[&a], b)],
            }
        }
        Lemma::MeetLeft | Lemma::MeetRight => {
            let a = g.context(depth);
            let b1 = g.related(&a, depth - 1);
            let b2 = g.related(&a, depth - 1);
            let pick = if lemma == Lemma::MeetLeft { b1.clone() } else { b2.clone() };
            Instance {
                premises: vec![seq(&[&a], OrthoFormula::meet(b1, b2))],
                conclusions: vec![seq(&[&a], pick)],
            }
        }
        Lemma::NegInversion => {
            let a = g.context(depth);
            let b = g.related(&a, depth - 1);
            Instance {
                premises: vec![seq(&[&a], OrthoFormula::neg(b.clone()))],
                conclusions: vec![seq(&[&a, &[b]], zero)],
            }
        }
        Lemma::DoubleNegation => {
            let a = g.context(depth);
            let c = g.related(&a, depth - 2);
            let inner = if g.coin() {
                OrthoFormula::neg(c.clone())
            } else {
                let d = g.related(&a, depth - 2);
                OrthoFormula::meet(OrthoFormula::neg(c.clone()), d)
            };
            let b = g.related(&a, depth);
            Instance {
                premises: vec![seq(&[&a, &[OrthoFormula::neg(inner)]], b.clone())],
                conclusions: vec![seq(&[&a, &[c]], b)],
            }
        }
        Lemma::PrimeSplit => {
            let a = g.context(depth);
            let c = g.related(&a, depth - 1);
            let p = g.atom();
            let neg_c = OrthoFormula::neg(c);
            Instance {
                premises: vec![seq(&[&a, std::slice::from_ref(&neg_c)], p.clone())],
                conclusions: vec![seq(&[&a], p), seq(&[&a, &[neg_c]], zero)],
            }
        }
        Lemma::Contraction => {
            let a = g.context(depth);
            let c = g.related(&a, depth);
            let b = g.related(std::slice::from_ref(&c), depth);
            Instance {
                premises: vec![seq(&[&a, &[c.clone(), c.clone()]], b.clone())],
                conclusions: vec![seq(&[&a, &[c]], b)],
            }
        }
        Lemma::Cut => {
            let a1 = g.context(depth);
            let a2 = g.context(depth);
            let c = g.related(&a1, depth);
            let b = g.related(std::slice::from_ref(&c), depth);
            Instance {
                premises: vec![seq(&[&a1], c.clone()), seq(&[&a2, &[c]], b.clone())],
                conclusions: vec![seq(&[&a1, &a2], b)],
            }
        }
    }
}

fn run_sample(engine: &OrthoEngine, lemma: Lemma, config: &AuditConfig, i: usize) -> Sample {
    let atoms: Vec<Elem> = engine.base().elements().collect();
    let mut g = FormulaGen::new(atoms, config.seed, i as u64);
    let depth = config.depth.max(2);
    let inst = instance(engine, lemma, &mut g, depth);
    let oracle = Oracle {
        engine,
        strategy: config.strategy,
        budget: config.budget,
    };
    for p in &inst.premises {
        match oracle.holds(p) {
            None => return Sample::Inconclusive,
            Some(false) => return Sample::Skipped,
            Some(true) => {}
        }
    }
    let base = engine.base();
    let render = |s: &Sequent| s.display(base).to_string();
    let need_all = lemma == Lemma::Bounds;
    let mut any = false;
    let mut all = true;
    for c in &inst.conclusions {
        match oracle.holds(c) {
            None => return Sample::Inconclusive,
            Some(true) => any = true,
            Some(false) => all = false,
        }
    }
    let ok = if need_all { all } else { any };
    if ok {
        Sample::Held
    } else {
        let premises: Vec<String> = inst.premises.iter().map(render).collect();
        let conclusions: Vec<String> = inst.conclusions.iter().map(render).collect();
        Sample::Violated(format!(
            "premises [{}] but not [{}]",
            premises.join("; "),
            conclusions.join(if need_all { " and " } else { " or " })
        ))
    }
}

/// Audits one admissible rule over `config.samples` random instances.
pub fn audit_admissible(engine: &OrthoEngine, lemma: Lemma, config: &AuditConfig) -> AuditReport {
    let results: Vec<Sample> = (0..config.samples)
        .into_par_iter()
        .map(|i| run_sample(engine, lemma, config, i))
        .collect();
    let mut report = AuditReport {
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

/// `count` random goals `a |- b` with both sides of depth at most `depth`.
pub fn random_queries(engine: &OrthoEngine, count: usize, depth: usize, seed: u64) -> Vec<Sequent> {
    let atoms: Vec<Elem> = engine.base().elements().collect();
    (0..count)
        .map(|i| {
            let mut g = FormulaGen::new(atoms.clone(), seed, i as u64);
            let a = g.formula(depth);
            let b = g.related(std::slice::from_ref(&a), depth);
            Sequent::pair(&a, &b)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessReport {
    pub queries: usize,
    pub derivable: usize,
    pub models: usize,
    /// Model-assignment pairs evaluated over all derivable queries.
    pub checks: usize,
    pub violations: Vec<String>,
}

/// Every derivable query must hold in every orthocomplemented semilattice
/// with at most `model_size` points under every compatible assignment.
pub fn soundness_audit(engine: &OrthoEngine, queries: &[Sequent], model_size: usize) -> SoundnessReport {
    let base = engine.base();
    let models: Vec<_> = ortho_models(model_size)
        .into_iter()
        .map(|m| {
            let assignments = compatible_assignments(&m, engine.relation());
            (m, assignments)
        })
        .collect();
    let per_query: Vec<(bool, usize, Vec<String>)> = queries
        .par_iter()
        .map(|q| {
            if !engine.decide_sequent(q).derivable {
                return (false, 0, Vec::new());
            }
            let mut checks = 0;
            let mut bad = Vec::new();
            for (mi, (m, assignments)) in models.iter().enumerate() {
                for a in assignments {
                    checks += 1;
                    if !sequent_holds(m, base, a, q).expect("total assignment") {
                        bad.push(format!("{} fails in model {mi} under {a:?}", q.display(base)));
                    }
                }
            }
            (true, checks, bad)
        })
        .collect();
    let mut report = SoundnessReport {
        queries: queries.len(),
        derivable: 0,
        models: models.len(),
        checks: 0,
        violations: Vec::new(),
    };
    for (derivable, checks, bad) in per_query {
        report.derivable += derivable as usize;
        report.checks += checks;
        report.violations.extend(bad);
    }
    report
}
