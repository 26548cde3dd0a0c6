use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use irk_core::corpus::{run_corpus, ExampleOutcome};
use irk_core::embed::{MAX_SEARCH_DUAL_SYM, MAX_SEARCH_SYM};
use irk_core::report::{build_report, build_verify_report, ReportError, ReportOptions};
use irk_core::schein::{Theorem, VerifyContext};
use irk_core::subsemigroup::ImageError;
use irk_core::{AlgebraError, CayleyTable, DualSymInv, InverseAlgebra, Subsemigroup, SymInv};
use serde::Serialize;

/// Orbit and Schein-sum analysis of subsemigroups of the symmetric and dual
/// symmetric inverse monoids.
#[derive(Parser)]
#[command(name = "irk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full decomposition report for one subsemigroup.
    Decompose(DecomposeArgs),
    /// Theorem verdicts for one subsemigroup.
    Verify(VerifyArgs),
    /// Replay the bundled worked examples.
    Corpus(CorpusArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraArg {
    Sym,
    DualSym,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args)]
struct Input {
    #[arg(long, value_enum)]
    algebra: AlgebraArg,
    #[arg(long)]
    n: usize,
    /// Semicolon-separated generators.
    #[arg(long, conflicts_with_all = ["table", "assign"])]
    gens: Option<String>,
    /// Cayley table file; needs --assign.
    #[arg(long, requires = "assign")]
    table: Option<PathBuf>,
    /// `label=element;...` images of table generators.
    #[arg(long, requires = "table")]
    assign: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    report: Format,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    input: Input,
    /// Add the embedding-degree search.
    #[arg(long)]
    degree: bool,
    #[arg(long, default_value_t = 4, requires = "degree")]
    n_max: usize,
    #[arg(long, default_value_t = 5_000_000, requires = "degree")]
    budget: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: Input,
    /// Defaults to all four.
    #[arg(long)]
    theorem: Option<Theorem>,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    only: Option<u8>,
    #[arg(long, value_enum, default_value_t)]
    report: Format,
}

enum Failure {
    Input(String),
    Invariant(String),
    Mismatch,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch => 1,
            Failure::Input(_) => 2,
            Failure::Invariant(_) => 3,
        }
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Algebra(e) => Failure::Input(e.to_string()),
            ReportError::Invariant(e) => Failure::Invariant(e.to_string()),
        }
    }
}

impl From<ImageError> for Failure {
    fn from(e: ImageError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Decompose(args) => run_decompose(args),
        Command::Verify(args) => run_verify(args),
        Command::Corpus(args) => corpus(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(m) => eprintln!("error: {m}"),
                Failure::Invariant(m) => eprintln!("invariant violation: {m}"),
                Failure::Mismatch => {}
            }
            ExitCode::from(f.code())
        }
    }
}

fn run_decompose(args: &DecomposeArgs) -> Result<(), Failure> {
    let n = args.input.n;
    match args.input.algebra {
        AlgebraArg::Sym => decompose(&SymInv::new(n)?, args),
        AlgebraArg::DualSym => decompose(&DualSymInv::new(n)?, args),
    }
}

fn run_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let n = args.input.n;
    match args.input.algebra {
        AlgebraArg::Sym => verify(&SymInv::new(n)?, args),
        AlgebraArg::DualSym => verify(&DualSymInv::new(n)?, args),
    }
}

fn decompose<A: InverseAlgebra>(alg: &A, args: &DecomposeArgs) -> Result<(), Failure> {
    let s = subsemigroup(alg, &args.input)?;
    let degree = if args.degree {
        if args.n_max > MAX_SEARCH_SYM {
            return Err(Failure::Input(format!(
                "size guard `degree search n_max` exceeded: n = {}, maximum is {MAX_SEARCH_SYM}",
                args.n_max
            )));
        }
        Some((args.n_max, args.n_max.min(MAX_SEARCH_DUAL_SYM), args.budget))
    } else {
        None
    };
    let opts = ReportOptions {
        degree,
        ..ReportOptions::default()
    };
    let report = build_report(&VerifyContext::new(alg), &s, &opts)?;
    emit(args.input.report, &report, || report.render_text())?;
    theorem_outcome(report.all_hold_or_inapplicable())
}

fn verify<A: InverseAlgebra>(alg: &A, args: &VerifyArgs) -> Result<(), Failure> {
    let s = subsemigroup(alg, &args.input)?;
    let which: Vec<Theorem> = match args.theorem {
        Some(t) => vec![t],
        None => Theorem::ALL.to_vec(),
    };
    let report =
        build_verify_report(&VerifyContext::new(alg), &s, &which).map_err(|e| Failure::Invariant(e.to_string()))?;
    emit(args.input.report, &report, || report.render_text())?;
    theorem_outcome(report.all_hold_or_inapplicable())
}

fn theorem_outcome(ok: bool) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Invariant("a theorem verdict fails".into()))
    }
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> Result<(), Failure> {
    match format {
        Format::Text => print!("{}", text()),
        Format::Json => {
            let json = serde_json::to_string_pretty(value).map_err(|e| Failure::Invariant(e.to_string()))?;
            println!("{json}");
        }
    }
    Ok(())
}

fn split_list(text: &str) -> impl Iterator<Item = &str> {
    text.split(';').map(str::trim).filter(|t| !t.is_empty())
}

fn parse_element<A: InverseAlgebra>(alg: &A, text: &str, what: &str) -> Result<A::Elem, Failure> {
    alg.parse(text)
        .map_err(|e| Failure::Input(format!("{what} `{text}`: {e}")))
}

fn subsemigroup<'a, A: InverseAlgebra>(alg: &'a A, input: &Input) -> Result<Subsemigroup<'a, A>, Failure> {
    match (&input.gens, &input.table, &input.assign) {
        (Some(gens), _, _) => {
            let gens = split_list(gens)
                .enumerate()
                .map(|(i, g)| parse_element(alg, g, &format!("generator {}", i + 1)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Subsemigroup::close(alg, &gens)?)
        }
        (None, Some(path), Some(assign)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let table = CayleyTable::load(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let mut pairs = Vec::new();
            for item in split_list(assign) {
                let (label, elem) = item
                    .split_once('=')
                    .ok_or_else(|| Failure::Input(format!("assignment `{item}` has no `=`")))?;
                let label = label.trim();
                pairs.push((
                    label.to_string(),
                    parse_element(alg, elem.trim(), &format!("image of `{label}`"))?,
                ));
            }
            Ok(Subsemigroup::image_of(alg, &table, &pairs)?)
        }
        _ => Err(Failure::Input("give --gens, or --table with --assign".into())),
    }
}

fn corpus(args: &CorpusArgs) -> Result<(), Failure> {
    let outcomes = run_corpus(args.only.map(usize::from))?;
    match args.report {
        Format::Json => emit(args.report, &outcomes, String::new)?,
        Format::Text => print!("{}", corpus_text(&outcomes)),
    }
    if outcomes.iter().all(ExampleOutcome::passed) {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn corpus_text(outcomes: &[ExampleOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        let bad: Vec<_> = o.mismatches().collect();
        if bad.is_empty() {
            out += &format!("example {}: pass ({} values)\n", o.example, o.items.len());
        } else {
            out += &format!(
                "example {}: FAIL ({} of {} values differ)\n",
                o.example,
                bad.len(),
                o.items.len()
            );
            for item in bad {
                out += &format!(
                    "  {}\n    expected {}\n    computed {}\n",
                    item.name, item.expected, item.computed
                );
            }
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    out += &format!("{passed}/{} pass\n", outcomes.len());
    out
}
