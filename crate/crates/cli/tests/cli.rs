use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;

use freelat_core::cc::CcSequent;
use freelat_core::order::parse_poset;
use freelat_core::ortho::Sequent;
use freelat_core::proof::deserialize;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn freelat(args: &[&str]) -> Output {
    freelat_env(args, &[])
}

fn freelat_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_freelat"));
    cmd.args(args).env_remove("FREELAT_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn one_below_zero_is_underivable() {
    let o = freelat(&["ortho", "decide", &path("bounds.poset"), "1 <= 0"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("underivable"));
}

#[test]
fn repeated_meet_factor_holds() {
    let o = freelat(&["semi", "decide", &path("chain.poset"), "a ^ a <= a"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn semi_decide_follows_the_order() {
    assert_eq!(code(&freelat(&["semi", "decide", &path("chain.poset"), "a <= b ^ c"])), 0);
    assert_eq!(code(&freelat(&["semi", "decide", &path("chain.poset"), "c <= a"])), 1);
}

#[test]
fn dist_decide_distributes() {
    let p = path("antichain.poset");
    assert_eq!(code(&freelat(&["dist", "decide", &p, "a ^ (b v c) <= a ^ b v a ^ c"])), 0);
    assert_eq!(code(&freelat(&["dist", "decide", &p, "a <= b v c"])), 1);
}

#[test]
fn counterexample_report_without_contraction() {
    let o = freelat(&["cc", "counterexample", "--k", "3", "--no-contraction"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    let line = |label: &str| *lines.iter().find(|l| l.contains(label)).unwrap_or_else(|| panic!("{label}\n{out}"));
    assert!(line("doubled A{N'} refutes").starts_with("PASS"));
    assert!(line("single A{N'} does not refute:").starts_with("PASS"));
    assert!(line("~A{N} does not refute").starts_with("PASS"));
    assert!(!out.contains("refutes with contraction"));
    assert!(out.contains("positive derivation (accepted by the checker)"));
    // the multi-witness clause does not survive finite truncation
    assert!(line("multi-witness").starts_with("FAIL"));
    assert_eq!(code(&o), 1);
}

#[test]
fn counterexample_with_contraction_includes_the_collapse() {
    let o = freelat(&["--format", "json", "cc", "counterexample", "--k", "2"]);
    let v = json(&o);
    let checks = v["checks"].as_array().unwrap();
    let collapse = checks
        .iter()
        .find(|c| c["label"] == "single A{N'} refutes with contraction")
        .unwrap();
    assert_eq!(collapse["derivable"], Value::Bool(true));
    assert_eq!(v["positive_accepted"], Value::Bool(true));
}

#[test]
fn derive_output_round_trips() {
    let base = Arc::new(parse_poset(&std::fs::read_to_string(data("square.poset")).unwrap()).unwrap());
    let o = freelat(&["--format", "json", "ortho", "derive", &path("square.poset"), "p ^ q <= ~~p"]);
    assert_eq!(code(&o), 0);
    let doc = json(&o)["proof"].as_str().unwrap().to_string();
    let d = deserialize::<Sequent>(&doc, &base).unwrap();
    assert_eq!(d.conclusion.display(&base).to_string(), "p ^ q |- ~~p");

    let o = freelat(&["--format", "json", "cc", "derive", &path("square.poset"), "~(p ^ q) |- ~p v ~q"]);
    assert_eq!(code(&o), 0);
    let doc = json(&o)["proof"].as_str().unwrap().to_string();
    let d = deserialize::<CcSequent>(&doc, &base).unwrap();
    assert_eq!(d.conclusion.display(&base).to_string(), "~(p ^ q) |- ~p v ~q");
}

#[test]
fn derived_documents_pass_proof_check() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("dn.proof");
    let o = freelat(&["ortho", "derive", &path("square.poset"), "p <= ~~p"]);
    assert_eq!(code(&o), 0);
    std::fs::write(&file, &o.stdout).unwrap();
    let f = file.to_string_lossy();
    let check = freelat(&["proof", "check", &f, &path("square.poset")]);
    assert_eq!(code(&check), 0, "{}", stdout(&check));

    // a tampered prime leaf is rejected
    let tampered = stdout(&o).replace("\"p |- p\"", "\"p |- q\"");
    std::fs::write(&file, tampered).unwrap();
    assert_eq!(code(&freelat(&["proof", "check", &f, &path("square.poset")])), 1);

    // a malformed document is a parse error
    std::fs::write(&file, "freelat-proof v9 ortho\n").unwrap();
    assert_eq!(code(&freelat(&["proof", "check", &f, &path("square.poset")])), 2);
}

#[test]
fn contraction_proofs_need_contraction_to_check() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.proof");
    let query = "A{one, half, ~A{one, half}} |-";
    let o = freelat(&["cc", "derive", &path("magnitude.poset"), query]);
    assert_eq!(code(&o), 0);
    std::fs::write(&file, &o.stdout).unwrap();
    let f = file.to_string_lossy();
    assert_eq!(code(&freelat(&["proof", "check", &f, &path("magnitude.poset")])), 0);
    assert_eq!(
        code(&freelat(&["proof", "check", &f, &path("magnitude.poset"), "--no-contraction"])),
        1
    );
    assert_eq!(
        code(&freelat(&["cc", "decide", &path("magnitude.poset"), query, "--no-contraction"])),
        1
    );
}

#[test]
fn show_proof_is_opt_in() {
    let quiet = freelat(&["ortho", "decide", &path("square.poset"), "p ^ ~p <= 0"]);
    assert_eq!(code(&quiet), 0);
    assert!(!stdout(&quiet).contains("freelat-proof"));
    let loud = freelat(&["ortho", "decide", &path("square.poset"), "p ^ ~p <= 0", "--show-proof"]);
    assert!(stdout(&loud).contains("freelat-proof v1 ortho"));
    let cc = freelat(&["cc", "decide", &path("square.poset"), "p |- p v q", "--show-proof"]);
    assert!(stdout(&cc).contains("freelat-proof v1 cc"));
}

#[test]
fn budget_exhaustion_and_override() {
    let query = "A{one, half, ~A{one, half}} ^ A{one, half, ~A{one, half}} |-";
    let args = ["cc", "derive", &path("magnitude.poset"), query, "--no-contraction"];
    assert_eq!(code(&freelat(&args)), 0);
    assert_eq!(code(&freelat_env(&args, &[("FREELAT_BUDGET", "2")])), 3);
    let mut flagged = args.to_vec();
    flagged.extend(["--budget", "1000"]);
    assert_eq!(code(&freelat_env(&flagged, &[("FREELAT_BUDGET", "2")])), 0);
    assert_eq!(code(&freelat_env(&args, &[("FREELAT_BUDGET", "lots")])), 2);
    let ortho = ["ortho", "derive", &path("square.poset"), "~(p ^ ~p) ^ q <= ~~q"];
    assert_eq!(code(&freelat_env(&ortho, &[("FREELAT_BUDGET", "1")])), 3);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(code(&freelat(&["nonsense"])), 2);
    assert_eq!(code(&freelat(&["ortho", "decide", &path("square.poset"), "p <= "])), 2);
    assert_eq!(code(&freelat(&["ortho", "decide", &path("square.poset"), "p <= r"])), 2);
    assert_eq!(code(&freelat(&["ortho", "decide", &path("missing.poset"), "p <= p"])), 2);
    // the ortho calculus needs bounds
    assert_eq!(code(&freelat(&["ortho", "decide", &path("chain.poset"), "a <= b"])), 2);
    assert_eq!(code(&freelat(&["ortho", "audit", &path("square.poset"), "--lemma", "weakening"])), 2);
    assert_eq!(code(&freelat(&["cc", "counterexample", "--k", "1"])), 2);
}

#[test]
fn structured_audits_need_a_seed_and_are_reproducible() {
    let base = ["--format", "json", "ortho", "audit", &path("square.poset"), "--lemma", "cut", "--samples", "60"];
    assert_eq!(code(&freelat(&base)), 2);
    let mut seeded = base.to_vec();
    seeded.extend(["--seed", "11"]);
    let a = freelat(&seeded);
    let b = freelat(&seeded);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 11);

    let text = freelat(&["ortho", "audit", &path("square.poset"), "--lemma", "contraction", "--samples", "20"]);
    assert!(stdout(&text).contains("seed 0"));

    let cc = ["--format", "json", "cc", "audit", &path("square.poset"), "--lemma", "cut", "--samples", "40", "--seed", "2"];
    let a = freelat(&cc);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, freelat(&cc).stdout);
}

#[test]
fn consistency_and_poset_check() {
    let o = freelat(&["ortho", "consistency", &path("magnitude.poset")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("consistent"));
    let o = freelat(&["--format", "json", "poset", "check", &path("magnitude.poset")]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["elements"].as_array().unwrap().len(), 4);
    assert_eq!(v["bounds"], serde_json::json!(["zero", "one"]));
    assert_eq!(v["one_sided"]["clean"], Value::Bool(true));
}
