use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use commands::{Output, Status};

/// Word problems and proof search for free lattice-like structures.
#[derive(Parser, Debug)]
#[command(name = "freelat", version, about)]
struct Cli {
    /// Output mode.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Preordered sets.
    #[command(subcommand)]
    Poset(PosetCmd),
    /// The free semilattice.
    #[command(subcommand)]
    Semi(SemiCmd),
    /// The free distributive lattice.
    #[command(subcommand)]
    Dist(DistCmd),
    /// The free orthocomplemented semilattice.
    #[command(subcommand)]
    Ortho(OrthoCmd),
    /// The countably complete boolean calculus over finite sets.
    #[command(subcommand)]
    Cc(CcCmd),
    /// Derivation documents.
    #[command(subcommand)]
    Proof(ProofCmd),
}

#[derive(Subcommand, Debug)]
enum PosetCmd {
    /// Parse a poset file and check the free entailment relations on it.
    Check {
        file: PathBuf,
        /// Longest sequence length for the closure-condition check.
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
}

#[derive(Subcommand, Debug)]
enum SemiCmd {
    /// Decide `w1 <= w2` for meet-words.
    Decide { file: PathBuf, query: String },
}

#[derive(Subcommand, Debug)]
enum DistCmd {
    /// Decide `t1 <= t2` for lattice terms.
    Decide { file: PathBuf, query: String },
}

#[derive(Subcommand, Debug)]
enum OrthoCmd {
    /// Decide `a <= b` (or a sequent `a ^ b |- c`).
    Decide {
        file: PathBuf,
        query: String,
        /// Print the derivation when one exists.
        #[arg(long)]
        show_proof: bool,
    },
    /// Search for a derivation under a node budget.
    Derive {
        file: PathBuf,
        query: String,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Audit one admissible rule on random instances.
    Audit {
        file: PathBuf,
        /// reflexive, bounds, transitive, meet-left, meet-right,
        /// neg-inversion, double-negation, prime-split, contraction or cut.
        #[arg(long)]
        lemma: String,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        /// Required with `--format json`.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Exhaustive)]
        strategy: StrategyArg,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Confirm that `1 <= 0` is underivable.
    Consistency { file: PathBuf },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Focused,
    Exhaustive,
}

#[derive(Args, Debug, Clone)]
struct CcFlags {
    /// Disable the contraction rule.
    #[arg(long)]
    no_contraction: bool,
    /// Use the multi-witness forms of the `A{..}`-left and `E{..}`-right rules.
    #[arg(long)]
    variant_rules: bool,
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum CcCmd {
    /// Decide a sequent `a ^ b |- c v d`.
    Decide {
        file: PathBuf,
        query: String,
        #[command(flatten)]
        flags: CcFlags,
        /// Print the derivation when one exists.
        #[arg(long)]
        show_proof: bool,
    },
    /// Search for a derivation and print it.
    Derive {
        file: PathBuf,
        query: String,
        #[command(flatten)]
        flags: CcFlags,
    },
    /// Audit one admissible rule on random instances.
    Audit {
        file: PathBuf,
        /// cut, meet-inversion, join-inversion, forall-inversion,
        /// exists-inversion, neg-right-shift, neg-left-shift, from-zero,
        /// from-one, duality or monotone.
        #[arg(long)]
        lemma: String,
        #[arg(long, default_value_t = 300)]
        samples: usize,
        /// Required with `--format json`.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Largest set inside `A{..}` and `E{..}`.
        #[arg(long, default_value_t = 2)]
        max_set: usize,
        #[arg(long)]
        no_contraction: bool,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Run the contraction counterexample on the chain `0 < 1/k < ... < 1`.
    Counterexample {
        #[arg(long)]
        k: usize,
        /// Skip the query that enables contraction.
        #[arg(long)]
        no_contraction: bool,
        #[arg(long)]
        budget: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum ProofCmd {
    /// Check a derivation document against a poset.
    Check {
        proof: PathBuf,
        poset: PathBuf,
        /// Reject contraction steps in boolean-calculus documents.
        #[arg(long)]
        no_contraction: bool,
        /// Accept the multi-witness rules in boolean-calculus documents.
        #[arg(long)]
        variant_rules: bool,
    },
}

fn dispatch(cli: &Cli) -> anyhow::Result<Output> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Poset(PosetCmd::Check { file, bound }) => commands::poset_check(file, *bound),
        Command::Semi(SemiCmd::Decide { file, query }) => commands::semi_decide(file, query),
        Command::Dist(DistCmd::Decide { file, query }) => commands::dist_decide(file, query),
        Command::Ortho(cmd) => match cmd {
            OrthoCmd::Decide {
                file,
                query,
                show_proof,
            } => commands::ortho_decide(file, query, *show_proof),
            OrthoCmd::Derive { file, query, budget } => commands::ortho_derive(file, query, *budget),
            OrthoCmd::Audit {
                file,
                lemma,
                samples,
                seed,
                depth,
                strategy,
                budget,
            } => commands::ortho_audit(
                file,
                lemma,
                *samples,
                commands::audit_seed(*seed, json)?,
                *depth,
                *strategy == StrategyArg::Focused,
                *budget,
            ),
            OrthoCmd::Consistency { file } => commands::ortho_consistency(file),
        },
        Command::Cc(cmd) => match cmd {
            CcCmd::Decide {
                file,
                query,
                flags,
                show_proof,
            } => commands::cc_decide(file, query, &flags.options()?, *show_proof),
            CcCmd::Derive { file, query, flags } => commands::cc_derive(file, query, &flags.options()?),
            CcCmd::Audit {
                file,
                lemma,
                samples,
                seed,
                depth,
                max_set,
                no_contraction,
                budget,
            } => {
                let flags = CcFlags {
                    no_contraction: *no_contraction,
                    variant_rules: false,
                    budget: *budget,
                };
                commands::cc_audit(
                    file,
                    lemma,
                    *samples,
                    commands::audit_seed(*seed, json)?,
                    *depth,
                    *max_set,
                    &flags.options()?,
                )
            }
            CcCmd::Counterexample {
                k,
                no_contraction,
                budget,
            } => commands::counterexample(*k, !*no_contraction, commands::budget(*budget)?),
        },
        Command::Proof(ProofCmd::Check {
            proof,
            poset,
            no_contraction,
            variant_rules,
        }) => commands::proof_check(proof, poset, !*no_contraction, *variant_rules),
    }
}

impl CcFlags {
    fn options(&self) -> anyhow::Result<freelat_core::cc::CcOptions> {
        Ok(freelat_core::cc::CcOptions {
            contraction: !self.no_contraction,
            multi_premise_variant: self.variant_rules,
            budget: commands::budget(self.budget)?,
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json values serialize")),
            }
            ExitCode::from(out.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Status::Usage as u8)
        }
    }
}
