use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use freelat_core::cc::{self, CcEngine, CcLemma, CcOptions, CcOutcome, CcSequent};
use freelat_core::distributive::{dnf_leq, dnf_normalize, to_dnf, LatticeTerm};
use freelat_core::order::{check_entailment_axioms, parse_poset, ArityMode, AxiomReport, EntailmentRelation, PreorderedSet};
use freelat_core::ortho::{self, AuditConfig, DeriveOutcome, Lemma, OrthoEngine, OrthoFormula, Sequent, Strategy};
use freelat_core::proof::{deserialize, serialize};
use freelat_core::semilattice::{meet_leq, meet_normalize, MeetWord};

/// Exit statuses.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Holds = 0,
    Fails = 1,
    Usage = 2,
    Budget = 3,
}

impl Status {
    fn from_bool(b: bool) -> Status {
        if b {
            Status::Holds
        } else {
            Status::Fails
        }
    }
}

pub struct Output {
    pub text: String,
    pub json: Value,
    pub status: Status,
}

pub const DEFAULT_BUDGET: usize = 1_000_000;
pub const DEFAULT_SEED: u64 = 0;

/// Explicit flag, then `FREELAT_BUDGET`, then the default.
pub fn budget(flag: Option<usize>) -> Result<usize> {
    let b = match flag {
        Some(b) => b,
        None => match std::env::var("FREELAT_BUDGET") {
            Ok(v) => v
                .trim()
                .parse()
                .with_context(|| format!("FREELAT_BUDGET must be a positive integer, found `{v}`"))?,
            Err(_) => DEFAULT_BUDGET,
        },
    };
    if b == 0 {
        bail!("budget must be positive");
    }
    Ok(b)
}

/// Structured output must be reproducible from its arguments alone.
pub fn audit_seed(seed: Option<u64>, structured: bool) -> Result<u64> {
    match seed {
        Some(s) => Ok(s),
        None if structured => bail!("--seed is required with --format json"),
        None => Ok(DEFAULT_SEED),
    }
}

fn load(path: &Path) -> Result<Arc<PreorderedSet>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let base = parse_poset(&text).with_context(|| format!("in {}", path.display()))?;
    Ok(Arc::new(base))
}

fn split_leq(query: &str) -> Result<(&str, &str)> {
    let (l, r) = query
        .split_once("<=")
        .ok_or_else(|| anyhow!("expected `<lhs> <= <rhs>`, found `{query}`"))?;
    if r.contains("<=") {
        bail!("expected a single `<=` in `{query}`");
    }
    Ok((l, r))
}

fn axioms_json(base: &PreorderedSet, r: &AxiomReport) -> Value {
    json!({
        "clean": r.is_clean(),
        "checked": r.checked,
        "violations": r.violations.iter().map(|v| json!({"condition": v.condition, "witness": v.witness})).collect::<Vec<_>>(),
        "singleton_disagreements": r.singleton_disagreements.iter().map(|&(a, b)| format!("{} |- {}", base.name(a), base.name(b))).collect::<Vec<_>>(),
    })
}

pub fn poset_check(file: &Path, bound: usize) -> Result<Output> {
    let base = load(file)?;
    let one = check_entailment_axioms(&EntailmentRelation::free(Arc::clone(&base), ArityMode::OneSided), bound);
    let two = check_entailment_axioms(&EntailmentRelation::free(Arc::clone(&base), ArityMode::TwoSided), bound);
    let bounds = match (base.zero(), base.one()) {
        (Some(z), Some(o)) => Some((base.name(z).to_string(), base.name(o).to_string())),
        _ => None,
    };
    let mut text = String::new();
    writeln!(text, "poset: {base}")?;
    writeln!(text, "elements: {}", base.len())?;
    match &bounds {
        Some((z, o)) => writeln!(text, "bounds: {z} {o}")?,
        None => writeln!(text, "bounds: none")?,
    }
    for (label, r) in [("one-sided", &one), ("two-sided", &two)] {
        let verdict = if r.is_clean() { "clean" } else { "violated" };
        writeln!(text, "free {label} relation: {verdict} ({} checks, bound {bound})", r.checked)?;
        for v in &r.violations {
            writeln!(text, "  condition {}: {}", v.condition, v.witness)?;
        }
    }
    let json = json!({
        "command": "poset check",
        "poset": base.to_string(),
        "elements": base.names(),
        "bounds": bounds.map(|(z, o)| vec![z, o]),
        "bound": bound,
        "one_sided": axioms_json(&base, &one),
        "two_sided": axioms_json(&base, &two),
    });
    Ok(Output {
        text,
        json,
        status: Status::from_bool(one.is_clean() && two.is_clean()),
    })
}

pub fn semi_decide(file: &Path, query: &str) -> Result<Output> {
    let base = load(file)?;
    let (l, r) = split_leq(query)?;
    let w1 = MeetWord::parse(&base, l).context("left word")?;
    let w2 = MeetWord::parse(&base, r).context("right word")?;
    let rel = EntailmentRelation::free(Arc::clone(&base), ArityMode::OneSided);
    let holds = meet_leq(&rel, &w1, &w2);
    let n1 = meet_normalize(&rel, &w1).display(&base).to_string();
    let n2 = meet_normalize(&rel, &w2).display(&base).to_string();
    let shown = format!("{} <= {}", w1.display(&base), w2.display(&base));
    let text = format!("{}: {shown}\nnormal forms: {n1} | {n2}\n", verdict(holds));
    let json = json!({
        "command": "semi decide",
        "query": shown,
        "holds": holds,
        "normal_forms": [n1, n2],
    });
    Ok(Output {
        text,
        json,
        status: Status::from_bool(holds),
    })
}

pub fn dist_decide(file: &Path, query: &str) -> Result<Output> {
    let base = load(file)?;
    let (l, r) = split_leq(query)?;
    let t1 = LatticeTerm::parse(&base, l).context("left term")?;
    let t2 = LatticeTerm::parse(&base, r).context("right term")?;
    let rel = EntailmentRelation::free(Arc::clone(&base), ArityMode::TwoSided);
    let (d1, d2) = (to_dnf(&t1), to_dnf(&t2));
    let holds = dnf_leq(&rel, &d1, &d2);
    let n1 = dnf_normalize(&rel, &d1).display(&base).to_string();
    let n2 = dnf_normalize(&rel, &d2).display(&base).to_string();
    let shown = format!("{} <= {}", t1.display(&base), t2.display(&base));
    let text = format!("{}: {shown}\nnormal forms: {n1} | {n2}\n", verdict(holds));
    let json = json!({
        "command": "dist decide",
        "query": shown,
        "holds": holds,
        "normal_forms": [n1, n2],
    });
    Ok(Output {
        text,
        json,
        status: Status::from_bool(holds),
    })
}

fn verdict(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "fails"
    }
}

fn derivability(holds: bool) -> &'static str {
    if holds {
        "derivable"
    } else {
        "underivable"
    }
}

fn ortho_engine(file: &Path) -> Result<OrthoEngine> {
    let base = load(file)?;
    OrthoEngine::free(base).context("the ortho calculus needs a bounded base")
}

/// `a <= b`, or a sequent written with `|-`.
fn ortho_query(base: &PreorderedSet, query: &str) -> Result<Sequent> {
    if query.contains("|-") {
        return Sequent::parse(base, query).context("sequent");
    }
    let (l, r) = split_leq(query)?;
    let a = OrthoFormula::parse(base, l).context("left formula")?;
    let b = OrthoFormula::parse(base, r).context("right formula")?;
    Ok(Sequent::pair(&a, &b))
}

pub fn ortho_decide(file: &Path, query: &str, show_proof: bool) -> Result<Output> {
    let engine = ortho_engine(file)?;
    let base = engine.base();
    let s = ortho_query(base, query)?;
    let d = engine.decide_sequent(&s);
    let shown = s.display(base).to_string();
    let mut text = format!(
        "{}: {shown} (explored {} of at most {} sequents)\n",
        derivability(d.derivable),
        d.explored,
        d.closure_bound
    );
    let doc = d.proof.as_ref().filter(|_| show_proof).map(|p| serialize(p, base));
    if let Some(doc) = &doc {
        text.push_str(doc);
    }
    let json = json!({
        "command": "ortho decide",
        "query": shown,
        "derivable": d.derivable,
        "explored": d.explored,
        "closure_bound": d.closure_bound.to_string(),
        "proof": doc,
    });
    Ok(Output {
        text,
        json,
        status: Status::from_bool(d.derivable),
    })
}

pub fn ortho_derive(file: &Path, query: &str, budget_flag: Option<usize>) -> Result<Output> {
    let engine = ortho_engine(file)?;
    let base = engine.base();
    let s = ortho_query(base, query)?;
    let budget = budget(budget_flag)?;
    let shown = s.display(base).to_string();
    let out = engine.derive(&s, budget);
    let (text, json, status) = match &out {
        DeriveOutcome::Proved { proof, explored } => {
            let doc = serialize(proof, base);
            let json = json!({"outcome": "proved", "explored": explored, "proof": doc});
            (doc, json, Status::Holds)
        }
        DeriveOutcome::Refuted(cert) => (
            format!(
                "underivable: {shown} (all {} reachable sequents refuted, bound {})\n",
                cert.explored.len(),
                cert.closure_bound
            ),
            json!({
                "outcome": "refuted",
                "explored": cert.explored.len(),
                "closure_bound": cert.closure_bound.to_string(),
            }),
            Status::Fails,
        ),
        DeriveOutcome::Exhausted { explored, budget } => (
            format!("budget exhausted: {shown} ({explored} sequents, budget {budget})\n"),
            json!({"outcome": "exhausted", "explored": explored, "budget": budget}),
            Status::Budget,
        ),
    };
    let mut json = json;
    json["command"] = json!("ortho derive");
    json["query"] = json!(shown);
    Ok(Output { text, json, status })
}

pub fn ortho_audit(
    file: &Path,
    lemma: &str,
    samples: usize,
    seed: u64,
    depth: usize,
    focused: bool,
    budget_flag: Option<usize>,
) -> Result<Output> {
    let engine = ortho_engine(file)?;
    let lemma: Lemma = lemma.parse().map_err(|e: String| anyhow!(e))?;
    let config = AuditConfig {
        samples,
        seed,
        depth,
        budget: budget(budget_flag)?,
        strategy: if focused {
            Strategy::Focused
        } else {
            Strategy::Exhaustive
        },
    };
    let r = ortho::audit_admissible(&engine, lemma, &config);
    let strategy = if focused { "focused" } else { "exhaustive" };
    let mut text = format!(
        "lemma {lemma}: {} violations, {} applicable, {} inconclusive of {} samples (seed {seed}, depth {depth}, {strategy})\n",
        r.violations.len(),
        r.applicable,
        r.inconclusive,
        r.samples
    );
    for v in &r.violations {
        writeln!(text, "  {v}")?;
    }
    let json = json!({
        "command": "ortho audit",
        "lemma": lemma.id(),
        "seed": seed,
        "samples": r.samples,
        "depth": depth,
        "strategy": strategy,
        "applicable": r.applicable,
        "inconclusive": r.inconclusive,
        "violations": r.violations,
    });
    Ok(Output {
        text,
        json,
        status: audit_status(r.violations.is_empty(), r.inconclusive),
    })
}

fn audit_status(clean: bool, inconclusive: usize) -> Status {
    if !clean {
        Status::Fails
    } else if inconclusive > 0 {
        Status::Budget
    } else {
        Status::Holds
    }
}

pub fn ortho_consistency(file: &Path) -> Result<Output> {
    let engine = ortho_engine(file)?;
    let r = engine.consistency_check();
    let text = if !r.precondition_holds {
        "precondition violated: 1 |- 0 holds in the relation\n".to_string()
    } else if r.consistent {
        format!("consistent: 1 <= 0 is underivable (explored {} sequents)\n", r.explored)
    } else {
        format!("inconsistent: 1 <= 0 is derivable (explored {} sequents)\n", r.explored)
    };
    let json = json!({
        "command": "ortho consistency",
        "precondition_holds": r.precondition_holds,
        "consistent": r.consistent,
        "explored": r.explored,
    });
    Ok(Output {
        text,
        json,
        status: Status::from_bool(r.precondition_holds && r.consistent),
    })
}

fn cc_engine(file: &Path) -> Result<CcEngine> {
    let base = load(file)?;
    CcEngine::free(base).context("the boolean calculus needs a bounded base")
}

/// A sequent, or `a <= b` read as `a |- b`.
fn cc_query(base: &PreorderedSet, query: &str) -> Result<CcSequent> {
    if query.contains("|-") {
        return CcSequent::parse(base, query).context("sequent");
    }
    let (l, r) = split_leq(query)?;
    let a = cc::CcFormula::parse(base, l).context("left formula")?;
    let b = cc::CcFormula::parse(base, r).context("right formula")?;
    Ok(CcSequent::new(base, [a], [b]))
}

fn options_json(o: &CcOptions) -> Value {
    json!({
        "contraction": o.contraction,
        "variant_rules": o.multi_premise_variant,
        "budget": o.budget,
    })
}

fn cc_run(file: &Path, query: &str, options: &CcOptions) -> Result<(CcEngine, CcSequent, CcOutcome)> {
    let engine = cc_engine(file)?;
    let s = cc_query(engine.base(), query)?;
    let out = engine.derive(&s, options);
    Ok((engine, s, out))
}

fn cc_status(out: &CcOutcome) -> Status {
    match out.verdict() {
        Some(b) => Status::from_bool(b),
        None => Status::Budget,
    }
}

fn cc_summary(shown: &str, out: &CcOutcome) -> String {
    match out {
        CcOutcome::Proved { explored, .. } => format!("derivable: {shown} (explored {explored} sequents)\n"),
        CcOutcome::Refuted { explored } => format!(
            "underivable: {shown} (all {} reachable sequents refuted)\n",
            explored.len()
        ),
        CcOutcome::Exhausted { explored, budget } => {
            format!("budget exhausted: {shown} ({explored} sequents, budget {budget})\n")
        }
    }
}

fn outcome_label(out: &CcOutcome) -> &'static str {
    match out {
        CcOutcome::Proved { .. } => "proved",
        CcOutcome::Refuted { .. } => "refuted",
        CcOutcome::Exhausted { .. } => "exhausted",
    }
}

pub fn cc_decide(file: &Path, query: &str, options: &CcOptions, show_proof: bool) -> Result<Output> {
    let (engine, s, out) = cc_run(file, query, options)?;
    let base = engine.base();
    let shown = s.display(base).to_string();
    let mut text = cc_summary(&shown, &out);
    let doc = out.proof().filter(|_| show_proof).map(|p| serialize(p, base));
    if let Some(doc) = &doc {
        text.push_str(doc);
    }
    let json = json!({
        "command": "cc decide",
        "query": shown,
        "options": options_json(options),
        "derivable": out.verdict(),
        "explored": out.explored(),
        "proof": doc,
    });
    Ok(Output {
        text,
        json,
        status: cc_status(&out),
    })
}

pub fn cc_derive(file: &Path, query: &str, options: &CcOptions) -> Result<Output> {
    let (engine, s, out) = cc_run(file, query, options)?;
    let base = engine.base();
    let shown = s.display(base).to_string();
    let doc = out.proof().map(|p| serialize(p, base));
    let text = doc.clone().unwrap_or_else(|| cc_summary(&shown, &out));
    let json = json!({
        "command": "cc derive",
        "query": shown,
        "options": options_json(options),
        "outcome": outcome_label(&out),
        "explored": out.explored(),
        "proof": doc,
    });
    Ok(Output {
        text,
        json,
        status: cc_status(&out),
    })
}

pub fn cc_audit(
    file: &Path,
    lemma: &str,
    samples: usize,
    seed: u64,
    depth: usize,
    max_set: usize,
    options: &CcOptions,
) -> Result<Output> {
    let engine = cc_engine(file)?;
    let lemma: CcLemma = lemma.parse().map_err(|e: String| anyhow!(e))?;
    let config = cc::CcAuditConfig {
        samples,
        seed,
        depth,
        max_set,
        options: options.clone(),
    };
    let r = cc::cc_audit(&engine, lemma, &config);
    let mut text = format!(
        "lemma {lemma}: {} violations, {} applicable, {} inconclusive of {} samples (seed {seed}, depth {depth}, sets up to {max_set}, contraction {})\n",
        r.violations.len(),
        r.applicable,
        r.inconclusive,
        r.samples,
        if options.contraction { "on" } else { "off" }
    );
    for v in &r.violations {
        writeln!(text, "  {v}")?;
    }
    let json = json!({
        "command": "cc audit",
        "lemma": lemma.id(),
        "seed": seed,
        "samples": r.samples,
        "depth": depth,
        "max_set": max_set,
        "options": options_json(options),
        "applicable": r.applicable,
        "inconclusive": r.inconclusive,
        "violations": r.violations,
    });
    Ok(Output {
        text,
        json,
        status: audit_status(r.violations.is_empty(), r.inconclusive),
    })
}

pub fn counterexample(k: usize, with_contraction: bool, budget: usize) -> Result<Output> {
    if k < 2 {
        bail!("--k must be at least 2");
    }
    let r = cc::counterexample_report(k, with_contraction, budget);
    let cx = cc::counterexample(k);
    let base = cx.engine.base();
    let mut text = String::new();
    writeln!(text, "base: {}", r.base)?;
    writeln!(text, "A{{N}} = {}", cx.forall_n.display(base))?;
    writeln!(text, "a = {}", cx.a.display(base))?;
    writeln!(text, "A{{N'}} = {}", cx.forall_n_prime.display(base))?;
    for c in &r.checks {
        let got = match c.outcome {
            Some(b) => derivability(b),
            None => "budget exhausted",
        };
        writeln!(
            text,
            "{} {}: {} [contraction {}, variant rules {}] expected {}, got {} ({} sequents)",
            if c.passed() { "PASS" } else { "FAIL" },
            c.label,
            c.sequent,
            if c.contraction { "on" } else { "off" },
            if c.variant { "on" } else { "off" },
            derivability(c.expected),
            got,
            c.explored
        )?;
    }
    let doc = r.positive.as_ref().map(|p| serialize(p, base));
    match &doc {
        Some(doc) => {
            let verdict = if r.positive_accepted { "accepted" } else { "rejected" };
            writeln!(text, "positive derivation ({verdict} by the checker):")?;
            text.push_str(doc);
        }
        None => writeln!(text, "no positive derivation found")?,
    }
    let passed = r.checks.iter().filter(|c| c.passed()).count();
    writeln!(text, "summary: {passed}/{} checks passed", r.checks.len())?;
    let json = json!({
        "command": "cc counterexample",
        "k": k,
        "base": r.base,
        "checks": r.checks.iter().map(|c| json!({
            "label": c.label,
            "sequent": c.sequent,
            "contraction": c.contraction,
            "variant_rules": c.variant,
            "expected": c.expected,
            "derivable": c.outcome,
            "explored": c.explored,
            "passed": c.passed(),
        })).collect::<Vec<_>>(),
        "positive_accepted": r.positive_accepted,
        "proof": doc,
        "passed": r.passed(),
    });
    Ok(Output {
        text,
        json,
        status: Status::from_bool(r.passed()),
    })
}

pub fn proof_check(proof: &Path, poset: &Path, contraction: bool, variant: bool) -> Result<Output> {
    let doc = std::fs::read_to_string(proof).with_context(|| format!("cannot read {}", proof.display()))?;
    let flavor = doc.lines().next().and_then(|l| l.split_whitespace().nth(2)).unwrap_or("");
    let (size, verdict) = if flavor == "cc" {
        let engine = cc_engine(poset)?;
        let d = deserialize::<CcSequent>(&doc, engine.base()).with_context(|| format!("in {}", proof.display()))?;
        let options = CcOptions {
            contraction,
            multi_premise_variant: variant,
            ..CcOptions::default()
        };
        (d.size(), engine.check(&d, &options))
    } else {
        let engine = ortho_engine(poset)?;
        let d = deserialize::<Sequent>(&doc, engine.base()).with_context(|| format!("in {}", proof.display()))?;
        (d.size(), engine.check(&d))
    };
    let text = match &verdict {
        Ok(()) => format!("accepted: {size} nodes\n"),
        Err(e) => format!("rejected: {e}\n"),
    };
    let json = json!({
        "command": "proof check",
        "flavor": flavor,
        "nodes": size,
        "accepted": verdict.is_ok(),
        "error": verdict.as_ref().err().map(|e| e.to_string()),
    });
    Ok(Output {
        text,
        json,
        status: Status::from_bool(verdict.is_ok()),
    })
}
