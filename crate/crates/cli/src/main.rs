//! `invsim`: compare two-arm trials, check merges for direction
//! reversals, and split tables into parts that neutralize or reverse the
//! aggregate verdict.
//!
//! Exit codes are a stable contract: 0 on success, 1 when the analysis
//! itself is infeasible or degenerate, 2 on any input problem.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

mod commands;
mod input;
mod report;

use commands::{AnalysisError, GlobalOpts, MethodChoice, NeutralizeMode, ReverseMode};
use input::{Input, InputError};

#[derive(Parser)]
#[command(
    name = "invsim",
    version,
    about = "Two-arm trial comparison, merge reversal checks, and reversal-building decompositions",
    after_help = "INPUT is a CSV or JSON file; \"-\" (the default) reads stdin.\n\
                  CSV: header `label,successes,trials` with rows A then B, or\n\
                  `part,label,successes,trials` with part 1 then part 2.\n\
                  JSON: {\"a\": {\"successes\": n, \"trials\": n}, \"b\": {...}} or {\"parts\": [two tables]}."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Comparison machinery: the exact posterior sum, the normal
    /// approximation, or both.
    #[arg(long, global = true, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,

    /// Attach independent oracle recomputations where their domains allow.
    #[arg(long, global = true)]
    verify: bool,

    /// Seed for the Monte Carlo oracle stream (used with --verify).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Report rendering.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Run the exact posterior sum even past its usual total-trials cap.
    #[arg(long, global = true)]
    force_exact: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exact,
    Normal,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Args)]
struct InputArg {
    /// Path to a CSV or JSON table file; "-" reads stdin.
    #[arg(value_name = "INPUT", default_value = "-")]
    input: String,
}

#[derive(Subcommand)]
enum Command {
    /// Significance of A versus B in one table.
    Compare(InputArg),
    /// Check a two-part input for a direction reversal under merging.
    MergeCheck(InputArg),
    /// Split one table into two parts whose arms tie exactly.
    Neutralize(NeutralizeArgs),
    /// Split one table into two parts that each lean the other way.
    Reverse(ReverseArgs),
}

#[derive(Args)]
struct NeutralizeArgs {
    #[command(flatten)]
    input: InputArg,

    /// Common rate for part 1; must be given together with --mu.
    #[arg(long, requires = "mu", conflicts_with = "auto")]
    lambda: Option<f64>,

    /// Common rate for part 2; must be given together with --lambda.
    #[arg(long, requires = "lambda", conflicts_with = "auto")]
    mu: Option<f64>,

    /// Pick the two rates automatically (the default when no rates are given).
    #[arg(long)]
    auto: bool,
}

#[derive(Args)]
#[command(group = ArgGroup::new("mode").required(true).args(["alpha", "maximize"]))]
struct ReverseArgs {
    #[command(flatten)]
    input: InputArg,

    /// Part 1's share of arm A's trials.
    #[arg(long, requires_all = ["beta", "cprime"], conflicts_with = "maximize")]
    alpha: Option<f64>,

    /// Part 1's share of arm B's trials.
    #[arg(long, requires = "alpha")]
    beta: Option<f64>,

    /// Common confidence to realize in both parts (0 neutralizes).
    #[arg(long, requires = "alpha")]
    cprime: Option<f64>,

    /// Search for the largest feasible confidence instead.
    #[arg(long)]
    maximize: bool,

    /// Also emit a whole-count rounding of the parts.
    #[arg(long)]
    integer: bool,
}

enum AppError {
    Input(InputError),
    Analysis(AnalysisError),
}

impl From<InputError> for AppError {
    fn from(err: InputError) -> Self {
        AppError::Input(err)
    }
}

impl From<AnalysisError> for AppError {
    fn from(err: AnalysisError) -> Self {
        AppError::Analysis(err)
    }
}

fn read_source(path: &str) -> Result<String, InputError> {
    let mut text = String::new();
    let outcome = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|s| {
            text = s;
        })
    };
    outcome.map_err(|err| InputError::Shape(format!("cannot read {path}: {err}")))?;
    Ok(text)
}

fn single(parsed: Input, subcommand: &str) -> Result<invsim::TrialTable, InputError> {
    match parsed {
        Input::Single(table) => Ok(table),
        Input::Pair(..) => Err(InputError::Shape(format!(
            "{subcommand} takes a single-table input; this file holds a two-part input"
        ))),
    }
}

fn pair(parsed: Input) -> Result<(invsim::TrialTable, invsim::TrialTable), InputError> {
    match parsed {
        Input::Pair(first, second) => Ok((first, second)),
        Input::Single(_) => Err(InputError::Shape(
            "merge-check takes a two-part input; this file holds a single table".into(),
        )),
    }
}

fn run(cli: Cli) -> Result<String, AppError> {
    let opts = GlobalOpts {
        method: match cli.method {
            MethodArg::Exact => MethodChoice::Exact,
            MethodArg::Normal => MethodChoice::Normal,
            MethodArg::Both => MethodChoice::Both,
        },
        verify: cli.verify,
        seed: cli.seed,
        force_exact: cli.force_exact,
    };

    let analysis = match cli.command {
        Command::Compare(args) => {
            let table = single(input::parse(&read_source(&args.input)?)?, "compare")?;
            commands::run_compare(table, &opts)?
        }
        Command::MergeCheck(args) => {
            let (first, second) = pair(input::parse(&read_source(&args.input)?)?)?;
            commands::run_merge_check(first, second, &opts)?
        }
        Command::Neutralize(args) => {
            let table = single(input::parse(&read_source(&args.input.input)?)?, "neutralize")?;
            let mode = match (args.lambda, args.mu) {
                (Some(lambda), Some(mu)) => NeutralizeMode::Fixed { lambda, mu },
                _ => NeutralizeMode::Auto,
            };
            commands::run_neutralize(table, mode, &opts)?
        }
        Command::Reverse(args) => {
            let table = single(input::parse(&read_source(&args.input.input)?)?, "reverse")?;
            let mode = if args.maximize {
                ReverseMode::Maximize
            } else {
                ReverseMode::Fixed {
                    alpha: args.alpha.expect("clap enforces the mode group"),
                    beta: args.beta.expect("clap enforces the mode group"),
                    c_prime: args.cprime.expect("clap enforces the mode group"),
                }
            };
            commands::run_reverse(table, mode, args.integer, &opts)?
        }
    };

    Ok(match cli.format {
        FormatArg::Json => report::render_json(&analysis),
        FormatArg::Text => report::render_text(&analysis),
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(rendered) => {
            println!("{rendered}");
            ExitCode::SUCCESS
        }
        Err(AppError::Input(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
        Err(AppError::Analysis(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
