//! Normal approximations to the posterior comparisons, and the confidence
//! scale used throughout the decomposition machinery.
//!
//! For one arm the posterior tail probability of the rate exceeding one
//! half approaches `Phi(-2s)` with `s = (S - N/2) / sqrt(N)`. For two arms
//! the observed rate difference standardizes to
//!
//! ```text
//! z = (S_A/N_A - S_B/N_B) / sqrt(S_A F_A / N_A^3 + S_B F_B / N_B^3)
//! ```
//!
//! and `Pr{p_A >= p_B} ~= Phi(z)`. The same comparison can be carried in
//! size-free form: with `gamma = N_A / N` and rate variances weighted by
//! arm share,
//!
//! ```text
//! C_AB = (P_A - P_B) / sigma_AB,
//! sigma_AB^2 = P_A Q_A / gamma + P_B Q_B / (1 - gamma),
//! ```
//!
//! so that `z = sqrt(N) * C_AB`. Sub-tables of a decomposition get the same
//! treatment with every weight taken relative to the whole table's total,
//! which is what lets confidences of different parts share one scale.

use serde::Serialize;
use thiserror::Error;

use crate::bayes::PosteriorMoments;
use crate::model::{Direction, FractionalTable, TrialTable};
use crate::special;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AsymptoticsError {
    #[error("arm rate is 0 or 1, so the normal approximation has zero variance")]
    DegenerateRate,
    #[error("the arms share one observed rate; the standardized difference is undefined")]
    Tie,
    #[error("argument outside the operation's domain: {0}")]
    Domain(&'static str),
}

/// How a two-arm probability was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Normal,
}

/// A two-arm comparison: the headline probability plus the standardized
/// statistics when the normal route produced them. Exact evaluations carry
/// no z-scale, so those fields stay `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonResult {
    pub prob_superiority: f64,
    pub c_value: Option<f64>,
    pub sigma: Option<f64>,
    pub z: Option<f64>,
    pub method: Method,
}

impl ComparisonResult {
    pub fn from_exact_prob(prob_superiority: f64) -> Self {
        ComparisonResult {
            prob_superiority,
            c_value: None,
            sigma: None,
            z: None,
            method: Method::Exact,
        }
    }
}

/// Confidence that arm B leads arm A inside one part of a decomposition,
/// on the whole-table scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubtrialConfidence {
    pub c_prime: f64,
    pub sigma: f64,
    pub part_index: u8,
}

/// Limiting one-arm tail mass `Phi(-2s)` for standardized excess
/// `s = (S - N/2) / sqrt(N)`.
pub fn significance_limit(s: f64) -> f64 {
    special::std_normal_cdf(-2.0 * s)
}

fn arm_rate_variance_term(successes: u64, trials: u64) -> f64 {
    let s = successes as f64;
    let n = trials as f64;
    s * (n - s) / (n * n * n)
}

fn degenerate(successes: u64, trials: u64) -> bool {
    successes == 0 || successes == trials
}

/// Normal approximation to `Pr{p_A >= p_B}` via the standardized observed
/// rate difference. Requires both arm rates strictly inside (0, 1).
pub fn prob_a_beats_b_normal(table: &TrialTable) -> Result<ComparisonResult, AsymptoticsError> {
    if degenerate(table.successes_a(), table.trials_a())
        || degenerate(table.successes_b(), table.trials_b())
    {
        return Err(AsymptoticsError::DegenerateRate);
    }
    let rates = table.rates();
    let var = arm_rate_variance_term(table.successes_a(), table.trials_a())
        + arm_rate_variance_term(table.successes_b(), table.trials_b());
    let z = (rates.p_a - rates.p_b) / var.sqrt();
    let n = table.total_trials() as f64;
    Ok(ComparisonResult {
        prob_superiority: special::std_normal_cdf(z),
        c_value: Some(z / n.sqrt()),
        sigma: Some((n * var).sqrt()),
        z: Some(z),
        method: Method::Normal,
    })
}

/// Mean and variance of the observed rate difference for arms with true
/// rates `p_a`, `p_b` and sizes `n_a`, `n_b`.
pub fn rate_diff_moments(
    p_a: f64,
    p_b: f64,
    n_a: u64,
    n_b: u64,
) -> Result<PosteriorMoments, AsymptoticsError> {
    if !(0.0..=1.0).contains(&p_a) || !(0.0..=1.0).contains(&p_b) {
        return Err(AsymptoticsError::Domain("rates must lie in [0, 1]"));
    }
    if n_a == 0 || n_b == 0 {
        return Err(AsymptoticsError::Domain("arm sizes must be positive"));
    }
    Ok(PosteriorMoments {
        mean_diff: p_a - p_b,
        var_diff: p_a * (1.0 - p_a) / n_a as f64 + p_b * (1.0 - p_b) / n_b as f64,
    })
}

/// Normal-limit probability that the observed rate lands within `epsilon`
/// standardized units of the true rate `p`:
/// `Phi(eps / sqrt(p q)) - Phi(-eps / sqrt(p q))`.
pub fn interval_prob_normal(p: f64, epsilon: f64) -> Result<f64, AsymptoticsError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(AsymptoticsError::Domain("p must lie in [0, 1]"));
    }
    if p == 0.0 || p == 1.0 {
        return Err(AsymptoticsError::DegenerateRate);
    }
    if !(epsilon >= 0.0) {
        return Err(AsymptoticsError::Domain("epsilon must be nonnegative"));
    }
    let scale = epsilon / (p * (1.0 - p)).sqrt();
    Ok(special::std_normal_cdf(scale) - special::std_normal_cdf(-scale))
}

/// Size-free confidence that arm A leads arm B in a merged table. The
/// signed `c_value` is positive when A is ahead, and the attached `z` and
/// probability come from `z = sqrt(N) * c_value`.
pub fn aggregate_confidence(table: &TrialTable) -> Result<ComparisonResult, AsymptoticsError> {
    if degenerate(table.successes_a(), table.trials_a())
        || degenerate(table.successes_b(), table.trials_b())
    {
        return Err(AsymptoticsError::DegenerateRate);
    }
    if table.direction() == Direction::Tie {
        return Err(AsymptoticsError::Tie);
    }
    let r = table.rates();
    let sigma_sq =
        r.p_a * (1.0 - r.p_a) / r.gamma + r.p_b * (1.0 - r.p_b) / (1.0 - r.gamma);
    let sigma = sigma_sq.sqrt();
    let c = (r.p_a - r.p_b) / sigma;
    let z = (table.total_trials() as f64).sqrt() * c;
    Ok(ComparisonResult {
        prob_superiority: special::std_normal_cdf(z),
        c_value: Some(c),
        sigma: Some(sigma),
        z: Some(z),
        method: Method::Normal,
    })
}

/// Confidence that arm B leads arm A within one part of a split, with all
/// trial weights taken relative to `n_total`, the parent table's total.
/// Positive `c_prime` means the part supports B.
pub fn subtrial_confidence(
    sub: &FractionalTable,
    n_total: f64,
    part_index: u8,
) -> Result<SubtrialConfidence, AsymptoticsError> {
    if !(n_total > 0.0) || !n_total.is_finite() {
        return Err(AsymptoticsError::Domain("n_total must be positive and finite"));
    }
    let p_a = sub.p_a();
    let p_b = sub.p_b();
    if !(p_a > 0.0 && p_a < 1.0 && p_b > 0.0 && p_b < 1.0) {
        return Err(AsymptoticsError::DegenerateRate);
    }
    let w_a = sub.trials_a() / n_total;
    let w_b = sub.trials_b() / n_total;
    let sigma_sq = p_a * (1.0 - p_a) / w_a + p_b * (1.0 - p_b) / w_b;
    let sigma = sigma_sq.sqrt();
    Ok(SubtrialConfidence {
        c_prime: (p_b - p_a) / sigma,
        sigma,
        part_index,
    })
}
