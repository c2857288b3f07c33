//! `fapres`: command-line front end to the automatic-group workbench.
//!
//! Exit status: 0 on success, 1 when an audit finds a violation (the report then
//! carries a `counterexample`), 2 on usage errors and unusable input.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use output::{Format, Outcome};

#[derive(Parser, Debug)]
#[command(name = "fapres", version, about = "Workbench for FA-presentable abelian groups")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    /// Print the JSON schema of the reports and exit.
    #[arg(long)]
    schema: bool,

    /// Report format; csv is only available for tabular reports.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Build a presentation from a spec such as `Z`, `ZInv(6)` or `Sum(Z,Pruefer(3))` and save it.
    Build(BuildArgs),
    /// Check a saved presentation's addition automaton against its codec.
    Verify(VerifyArgs),
    /// Count domain words of each length.
    Count(CountArgs),
    /// Evaluate a sentence, or compile a formula to its definable set.
    Eval(EvalArgs),
    /// Growth parameters and the level-set audits.
    Growth(GrowthArgs),
    /// Trace p-adic norm jumps of the level sets over a list of primes.
    Trace(TraceArgs),
    /// θ(A, d): the least |P|/|A| over progressions P ⊇ A of rank at most d.
    Theta(ThetaArgs),
    /// p-adic norm of one element.
    Norm(NormArgs),
    /// Audit the convex-body lemma on seeded random lattices or one given instance.
    LatticeCheck(LatticeArgs),
    /// Discrete John sandwich for a lattice and a centered box.
    John(JohnArgs),
}

#[derive(Args, Debug, Serialize)]
struct BuildArgs {
    #[arg(long)]
    spec: String,
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Also verify the addition automaton exhaustively up to this word length.
    #[arg(long, value_name = "L")]
    verify: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long, value_name = "BUNDLE")]
    pres: PathBuf,
    /// All word pairs up to this length are checked.
    #[arg(long, default_value_t = 6)]
    length: usize,
    /// Check this many seeded random pairs instead of all of them.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct CountArgs {
    #[arg(long, value_name = "BUNDLE")]
    pres: PathBuf,
    #[arg(long, default_value_t = 12)]
    nmax: usize,
}

#[derive(Args, Debug, Serialize)]
struct EvalArgs {
    #[arg(long, value_name = "BUNDLE")]
    pres: PathBuf,
    #[arg(long)]
    formula: String,
    /// Save the definable-set automaton (formulas with free variables).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum AuditKind {
    Base,
    Sum,
    Growth,
    Preimage,
    Length,
}

#[derive(Args, Debug, Serialize)]
struct GrowthArgs {
    #[arg(long, value_name = "BUNDLE")]
    pres: PathBuf,
    /// Levels checked by the sum and growth audits.
    #[arg(long, default_value_t = 6)]
    nmax: usize,
    /// Audits to run.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "base,sum,growth,preimage,length")]
    audits: Vec<AuditKind>,
    /// Primes for the preimage and section-length audits.
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    primes: Vec<u64>,
    /// Levels checked by the preimage audit.
    #[arg(long, default_value_t = 4)]
    pre_nmax: usize,
    /// Word lengths scanned for the per-length growth ratio C1.
    #[arg(long, default_value_t = 30)]
    ratio_n: usize,
    /// Largest len(x) in the section-length audit.
    #[arg(long, default_value_t = 10)]
    section_len: usize,
    /// Shorthand for `--format json`.
    #[arg(long)]
    #[serde(skip)]
    json: bool,
}

#[derive(Args, Debug, Serialize)]
struct TraceArgs {
    #[arg(long, value_name = "BUNDLE")]
    pres: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    primes: Vec<u64>,
    /// Largest level searched for a jump.
    #[arg(long, default_value_t = 20)]
    nmax: usize,
    /// θ is computed only for level sets of at most this size.
    #[arg(long, env = "FAPRES_THETA_CAP", default_value_t = 24)]
    theta_cap: u64,
}

#[derive(Args, Debug, Serialize)]
struct ThetaArgs {
    /// Comma-separated rationals, or points separated by `;` such as `0,0;1,2`.
    #[arg(long)]
    set: String,
    #[arg(long)]
    rank: usize,
    /// Largest progression size searched.
    #[arg(long, env = "FAPRES_THETA_CAP", default_value_t = 64)]
    cap: u64,
    /// Generator subdivisions tried for rank ≥ 2.
    #[arg(long, default_value_t = 2)]
    denominators: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum VariantArg {
    Rational,
    Vector,
    Torsion,
}

#[derive(Args, Debug, Serialize)]
struct NormArgs {
    /// A rational, a comma-separated vector, or a fraction read mod 1.
    #[arg(long)]
    x: String,
    #[arg(long)]
    p: u64,
    #[arg(long, value_enum, default_value = "rational")]
    variant: VariantArg,
}

#[derive(Args, Debug, Serialize)]
struct LatticeArgs {
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Audit one lattice instead: basis rows separated by `;`.
    #[arg(long, requires = "half")]
    basis: Option<String>,
    /// Half-widths of the centered box.
    #[arg(long = "box", requires = "basis")]
    #[serde(rename = "box")]
    half: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct JohnArgs {
    /// Basis rows separated by `;`.
    #[arg(long)]
    basis: String,
    /// Half-widths of the centered box.
    #[arg(long = "box")]
    #[serde(rename = "box")]
    half: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.schema {
        output::print_stdout(&serde_json::to_string_pretty(&output::schema()).expect("schema serializes"));
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (see --help)");
        return ExitCode::from(2);
    };
    let format = match (&command, cli.format) {
        (Command::Growth(g), None) if g.json => Format::Json,
        (_, Some(f)) => f,
        (Command::Eval(_), None) => Format::Text,
        _ => Format::Json,
    };
    match run(&command).and_then(|outcome| outcome.emit(&command, format, cli.report.as_deref())) {
        Ok(passed) => ExitCode::from(if passed { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: &Command) -> Result<Outcome, String> {
    match command {
        Command::Build(a) => commands::build(a),
        Command::Verify(a) => commands::verify(a),
        Command::Count(a) => commands::count(a),
        Command::Eval(a) => commands::eval(a),
        Command::Growth(a) => commands::growth(a),
        Command::Trace(a) => commands::trace(a),
        Command::Theta(a) => commands::theta(a),
        Command::Norm(a) => commands::norm(a),
        Command::LatticeCheck(a) => commands::lattice_check(a),
        Command::John(a) => commands::john(a),
    }
}
