//! The four analyses behind the subcommands, each returning a full
//! [`AnalysisReport`].

use thiserror::Error;

use invsim::bayes::{self, EXACT_TOTAL_CAP};
use invsim::oracle::{self, QUADRATURE_TOTAL_CAP, RATIONAL_TOTAL_CAP};
use invsim::{
    asymptotics, decompose, paradox, AsymptoticsError, BayesError, ComparisonResult,
    DecomposeError, ParadoxError, SubtrialConfidence, TrialTable,
};

use crate::report::{
    AnalysisReport, CeilingSection, CompareResults, GridOracleSection, InputEcho,
    MergeCheckResults, NeutralizePlan, NeutralizeResults, OracleSection, PrintedCeiling,
    RealizedConfidence, Results, ReverseResults, PRINTED_CEILING_NOTE, SCHEMA_VERSION,
};

/// Draws behind `--verify`'s Monte Carlo recomputation.
const VERIFY_MC_SAMPLES: u64 = 1_000_000;

/// Lattice for `--verify`'s exhaustive reversal sweep; coarse enough to
/// stay interactive, fine enough to catch a search that wandered off.
const VERIFY_GRID_LATTICE: u32 = 21;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Bayes(#[from] BayesError),
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
    #[error(transparent)]
    Paradox(#[from] ParadoxError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Exact,
    Normal,
    Both,
}

#[derive(Debug, Clone, Copy)]
pub struct GlobalOpts {
    pub method: MethodChoice,
    pub verify: bool,
    pub seed: u64,
    pub force_exact: bool,
}

pub enum NeutralizeMode {
    Auto,
    Fixed { lambda: f64, mu: f64 },
}

pub enum ReverseMode {
    Fixed { alpha: f64, beta: f64, c_prime: f64 },
    Maximize,
}

fn report(input_echo: InputEcho, results: Results, warnings: Vec<String>) -> AnalysisReport {
    AnalysisReport {
        schema_version: SCHEMA_VERSION,
        input_echo,
        results,
        warnings,
    }
}

/// The exact posterior sum under the method flags: capped by default,
/// uncapped behind `--force-exact`, skipped with a warning when the cap
/// bites and the normal route can still carry the report.
fn exact_comparison(
    table: &TrialTable,
    opts: &GlobalOpts,
    warnings: &mut Vec<String>,
) -> Result<Option<ComparisonResult>, AnalysisError> {
    let total = table.total_trials();
    if total <= EXACT_TOTAL_CAP {
        let prob = bayes::prob_a_beats_b_exact(table)?;
        return Ok(Some(ComparisonResult::from_exact_prob(prob)));
    }
    if opts.force_exact {
        let prob = bayes::prob_a_beats_b_exact_uncapped(table)?;
        return Ok(Some(ComparisonResult::from_exact_prob(prob)));
    }
    if opts.method == MethodChoice::Both {
        warnings.push(format!(
            "exact sum skipped: {total} total trials exceed the {EXACT_TOTAL_CAP}-trial cap; pass --force-exact to run it anyway"
        ));
        return Ok(None);
    }
    Err(BayesError::TooLarge {
        total,
        cap: EXACT_TOTAL_CAP,
    }
    .into())
}

fn oracle_section(table: &TrialTable, opts: &GlobalOpts, warnings: &mut Vec<String>) -> OracleSection {
    let total = table.total_trials();
    let quadrature = if total <= QUADRATURE_TOTAL_CAP {
        Some(oracle::prob_a_beats_b_quadrature(table).expect("cap checked"))
    } else {
        warnings.push(format!(
            "quadrature oracle skipped: {total} total trials exceed its {QUADRATURE_TOTAL_CAP}-trial domain"
        ));
        None
    };
    let rational = if total <= RATIONAL_TOTAL_CAP {
        Some(oracle::prob_a_beats_b_rational(table).expect("cap checked"))
    } else {
        warnings.push(format!(
            "rational oracle skipped: {total} total trials exceed its {RATIONAL_TOTAL_CAP}-trial domain"
        ));
        None
    };
    OracleSection {
        quadrature,
        rational,
        monte_carlo: oracle::prob_a_beats_b_montecarlo(table, VERIFY_MC_SAMPLES, opts.seed),
    }
}

pub fn run_compare(table: TrialTable, opts: &GlobalOpts) -> Result<AnalysisReport, AnalysisError> {
    let mut warnings = Vec::new();

    let exact = match opts.method {
        MethodChoice::Exact | MethodChoice::Both => exact_comparison(&table, opts, &mut warnings)?,
        MethodChoice::Normal => None,
    };
    let normal = match opts.method {
        MethodChoice::Normal | MethodChoice::Both => {
            match asymptotics::prob_a_beats_b_normal(&table) {
                Ok(result) => Some(result),
                Err(err @ AsymptoticsError::DegenerateRate) if opts.method == MethodChoice::Both => {
                    warnings.push(format!("normal approximation skipped: {err}"));
                    None
                }
                Err(err) => return Err(err.into()),
            }
        }
        MethodChoice::Exact => None,
    };
    if exact.is_none() && normal.is_none() {
        return Err(AnalysisError::Unsupported(
            "no comparison method could run on this table; see the warnings".into(),
        ));
    }

    let oracle = if opts.verify {
        Some(oracle_section(&table, opts, &mut warnings))
    } else {
        None
    };

    Ok(report(
        InputEcho::Single { table },
        Results::Compare(CompareResults {
            exact,
            normal,
            posterior_moments: bayes::posterior_diff_moments(&table),
            oracle,
        }),
        warnings,
    ))
}

pub fn run_merge_check(
    first: TrialTable,
    second: TrialTable,
    opts: &GlobalOpts,
) -> Result<AnalysisReport, AnalysisError> {
    let mut warnings = Vec::new();
    let merge_check = paradox::simpson_check(&first, &second)?;
    let oracle = if opts.verify {
        // The merged table carries the headline claim, so that is what
        // gets recomputed.
        Some(oracle_section(&merge_check.merged, opts, &mut warnings))
    } else {
        None
    };
    Ok(report(
        InputEcho::Pair {
            parts: (first, second),
        },
        Results::MergeCheck(MergeCheckResults { merge_check, oracle }),
        warnings,
    ))
}

pub fn run_neutralize(
    table: TrialTable,
    mode: NeutralizeMode,
    opts: &GlobalOpts,
) -> Result<AnalysisReport, AnalysisError> {
    let mut warnings = Vec::new();
    let (lambda, mu) = match mode {
        NeutralizeMode::Fixed { lambda, mu } => (lambda, mu),
        NeutralizeMode::Auto => decompose::suggest_lambda_mu(&table)?,
    };
    let parts = decompose::neutralize(&table, lambda, mu)?;
    let integerized = decompose::integerize(&parts)?;
    let plan = NeutralizePlan {
        lambda,
        mu,
        alpha: parts.0.trials_a() / table.trials_a() as f64,
        beta: parts.0.trials_b() / table.trials_b() as f64,
    };
    if opts.verify {
        warnings.push(
            "verify: neutralize makes no stochastic claim; the integerized parts carry their own verified flag"
                .into(),
        );
    }
    Ok(report(
        InputEcho::Single { table },
        Results::Neutralize(NeutralizeResults {
            plan,
            parts,
            integerized,
        }),
        warnings,
    ))
}

fn realized(confidence: &SubtrialConfidence, n_total: f64) -> RealizedConfidence {
    RealizedConfidence {
        part_index: confidence.part_index,
        c_prime: confidence.c_prime,
        sigma: confidence.sigma,
        z: confidence.c_prime * n_total.sqrt(),
    }
}

pub fn run_reverse(
    table: TrialTable,
    mode: ReverseMode,
    integer_output: bool,
    opts: &GlobalOpts,
) -> Result<AnalysisReport, AnalysisError> {
    let mut warnings = Vec::new();
    let maximize = matches!(mode, ReverseMode::Maximize);
    let solution = match mode {
        ReverseMode::Fixed { alpha, beta, c_prime } => {
            decompose::solve_reversal(&table, alpha, beta, c_prime)?
        }
        ReverseMode::Maximize => decompose::maximize_reversal(&table)?,
    };

    let rates = table.rates();
    let plan = &solution.plan;
    let ceilings = CeilingSection {
        exact: decompose::cprime_ceiling_exact(
            rates,
            plan.alpha,
            plan.beta,
            plan.sigma_alpha,
            plan.sigma_beta,
        ),
        sufficient: decompose::cprime_ceiling_sufficient(rates, plan.alpha, plan.beta),
        printed: match decompose::cprime_ceiling_printed(rates) {
            Ok(value) => Some(PrintedCeiling {
                value,
                note: PRINTED_CEILING_NOTE,
            }),
            Err(err) => {
                warnings.push(format!("printed ceiling unavailable: {err}"));
                None
            }
        },
    };

    let n_total = table.total_trials() as f64;
    let realized_confidences = (
        realized(&solution.realized_confidences.0, n_total),
        realized(&solution.realized_confidences.1, n_total),
    );

    let integerized = if integer_output {
        Some(decompose::integerize(&solution.parts)?)
    } else {
        None
    };

    let oracle = if opts.verify && maximize {
        Some(GridOracleSection {
            grid: oracle::maximize_reversal_grid(&table, VERIFY_GRID_LATTICE),
        })
    } else {
        if opts.verify {
            warnings.push("verify: the grid oracle runs only with --maximize".into());
        }
        None
    };

    Ok(report(
        InputEcho::Single { table },
        Results::Reverse(ReverseResults {
            verified: solution.verified,
            plan: solution.plan,
            parts: solution.parts,
            realized_confidences,
            ceilings,
            integerized,
            oracle,
        }),
        warnings,
    ))
}
