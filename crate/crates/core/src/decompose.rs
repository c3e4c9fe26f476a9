//! Splitting one two-arm table into two sub-trials that neutralize or
//! reverse its aggregate conclusion.
//!
//! Write `P_A > P_B` for the aggregate rates, `alpha` and `beta` for the
//! fractions of each arm's trials assigned to part 1, and `P_A1`, `P_A2`,
//! `P_B1`, `P_B2` for the unknown sub-rates. The averaging identities
//!
//! ```text
//! alpha P_A1 + (1 - alpha) P_A2 = P_A
//! beta  P_B1 + (1 - beta)  P_B2 = P_B
//! ```
//!
//! leave two degrees of freedom. Demanding that each part favor B at a
//! common confidence `C'`, that is `P_B_i - P_A_i = C' sigma_i` with
//! `sigma_i` the part's own confidence scale, closes the system:
//!
//! ```text
//! K_1 = ((1-beta) P_A - (1-alpha) P_B) / (alpha - beta)
//! K_2 = (alpha P_B - beta P_A) / (alpha - beta)
//! P_A1 = K_1 + (1-alpha)/(alpha-beta) C' sigma_beta
//! P_A2 = K_2 -    alpha/(alpha-beta)  C' sigma_beta
//! P_B1 = K_1 + (1-beta)/(alpha-beta)  C' sigma_alpha
//! P_B2 = K_2 -     beta/(alpha-beta)  C' sigma_alpha
//! sigma_alpha = alpha sigma_1 + (1-alpha) sigma_2
//! sigma_beta  = beta  sigma_1 + (1-beta)  sigma_2
//! ```
//!
//! The `sigma_i` themselves depend on the sub-rates, so the system is
//! implicit; [`solve_reversal`] closes it with a damped fixed-point
//! iteration and verifies the result directly on the realized sub-tables.
//! Every analytic ceiling in this module is a search accelerator or a
//! reference output; feasibility truth is always that direct check.

use serde::Serialize;
use thiserror::Error;

use crate::asymptotics::{self, SubtrialConfidence};
use crate::model::{Direction, FractionalTable, ModelError, RatePair, TrialTable};

#[derive(Debug, Error, PartialEq)]
pub enum DecomposeError {
    #[error("lambda and mu must strictly bracket both aggregate rates and lie in [0, 1]")]
    Placement,
    #[error("the arms share one observed rate; there is no conclusion to rework")]
    Tie,
    #[error("no decomposition with the requested shape exists")]
    Infeasible,
    #[error("fixed-point iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("alpha = beta leaves the sub-rate system singular")]
    Degenerate,
    #[error("arm rate is 0 or 1, so no split can move the conclusion")]
    DegenerateRate,
    #[error("argument outside the operation's domain: {0}")]
    Domain(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The solved sub-rate system for one (alpha, beta, C') choice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionPlan {
    pub alpha: f64,
    pub beta: f64,
    pub c_prime: f64,
    pub k1: f64,
    pub k2: f64,
    pub sigma_1: f64,
    pub sigma_2: f64,
    pub sigma_alpha: f64,
    pub sigma_beta: f64,
    pub p_a1: f64,
    pub p_a2: f64,
    pub p_b1: f64,
    pub p_b2: f64,
}

/// A plan realized as two fractional sub-tables, with the confidence each
/// part actually achieves when recomputed from its own cells.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReversalSolution {
    pub plan: DecompositionPlan,
    pub parts: (FractionalTable, FractionalTable),
    pub realized_confidences: (SubtrialConfidence, SubtrialConfidence),
    pub verified: bool,
}

/// Fractional parts rounded to whole counts, with the confidences
/// recomputed on the integer tables. `verified` means both integer parts
/// still lean toward B (or tie) and both confidences were computable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegerizedParts {
    pub parts: (TrialTable, TrialTable),
    pub realized_confidences: (Option<SubtrialConfidence>, Option<SubtrialConfidence>),
    pub verified: bool,
}

/// Split a table into two sub-trials whose arms tie exactly: part 1 runs
/// both arms at rate `lambda`, part 2 at rate `mu`. The two rates must
/// strictly bracket the aggregate rates; either may be the low one.
pub fn neutralize(
    table: &TrialTable,
    lambda: f64,
    mu: f64,
) -> Result<(FractionalTable, FractionalTable), DecomposeError> {
    let r = table.rates();
    if table.direction() == Direction::Tie {
        return Err(DecomposeError::Tie);
    }
    let inside = |x: f64| (0.0..=1.0).contains(&x);
    if !inside(lambda) || !inside(mu) {
        return Err(DecomposeError::Placement);
    }
    let lo = lambda.min(mu);
    let hi = lambda.max(mu);
    if !(lo < r.p_a && lo < r.p_b && hi > r.p_a && hi > r.p_b) {
        return Err(DecomposeError::Placement);
    }
    let alpha = (mu - r.p_a) / (mu - lambda);
    let beta = (mu - r.p_b) / (mu - lambda);
    Ok(build_parts(table, alpha, beta, lambda, lambda, mu, mu)?)
}

/// A serviceable rate pair for [`neutralize`]: the midpoint of `(0, P_B)`
/// below and of `(P_A, 1)` above.
pub fn suggest_lambda_mu(table: &TrialTable) -> Result<(f64, f64), DecomposeError> {
    let r = table.rates();
    match table.direction() {
        Direction::Tie => return Err(DecomposeError::Tie),
        Direction::BAhead => {
            return Err(DecomposeError::Domain("table must favor arm A"));
        }
        Direction::AAhead => {}
    }
    if r.p_b == 0.0 || r.p_a == 1.0 {
        // No room on that side of the rates.
        return Err(DecomposeError::Placement);
    }
    Ok((r.p_b / 2.0, (r.p_a + 1.0) / 2.0))
}

/// Whether (alpha, beta) passes the sign conditions that any `C' >= 0`
/// reversal must satisfy. Necessary, not sufficient; assumes a
/// non-degenerate table with `P_A > P_B` and fractions in (0, 1).
pub fn necessary_feasible(rates: RatePair, alpha: f64, beta: f64) -> bool {
    let (pa, pb) = (rates.p_a, rates.p_b);
    let (qa, qb) = (1.0 - pa, 1.0 - pb);
    if alpha >= beta {
        alpha * pb >= beta * pa && (1.0 - beta) * qa >= (1.0 - alpha) * qb
    } else {
        (1.0 - alpha) * pb >= (1.0 - beta) * pa && beta * qa >= alpha * qb
    }
}

/// Largest `C'` keeping all four sub-rates inside [0, 1] when the
/// confidence aggregates take the given values: the tightest of the four
/// boundary constraints. Scales exactly as `1 / sigma`.
pub fn cprime_ceiling_exact(
    rates: RatePair,
    alpha: f64,
    beta: f64,
    sigma_alpha: f64,
    sigma_beta: f64,
) -> f64 {
    let (pa, pb) = (rates.p_a, rates.p_b);
    let (qa, qb) = (1.0 - pa, 1.0 - pb);
    let (a_bar, b_bar) = (1.0 - alpha, 1.0 - beta);
    // Each branch has two constraints pushed toward rate 1 (numerator
    // `top`) and two toward 0 (`bottom`); the denominators pair up the
    // same way in both.
    let (top, bottom) = if alpha >= beta {
        (b_bar * qa - a_bar * qb, alpha * pb - beta * pa)
    } else {
        (a_bar * pb - b_bar * pa, beta * qa - alpha * qb)
    };
    let candidates = [
        top / (a_bar * sigma_beta),
        top / (b_bar * sigma_alpha),
        bottom / (alpha * sigma_beta),
        bottom / (beta * sigma_alpha),
    ];
    candidates.into_iter().fold(f64::INFINITY, f64::min)
}

/// A `C'` guaranteed feasible for (alpha, beta) regardless of where the
/// fixed point lands, from the worst-case bound `p q <= 1/4` on every
/// sub-rate's variance contribution.
pub fn cprime_ceiling_sufficient(rates: RatePair, alpha: f64, beta: f64) -> f64 {
    let (pa, pb) = (rates.p_a, rates.p_b);
    let (qa, qb) = (1.0 - pa, 1.0 - pb);
    let (a_bar, b_bar) = (1.0 - alpha, 1.0 - beta);
    let gamma = rates.gamma;
    let scale = 2.0 * (gamma * (1.0 - gamma)).sqrt();
    if alpha >= beta {
        let slack = (b_bar * qa - a_bar * qb) / b_bar;
        let gap = (alpha * pb - beta * pa) / alpha;
        scale * beta.min(a_bar).sqrt() * slack.min(gap)
    } else {
        let slack = (beta * qa - alpha * qb) / beta;
        let gap = (a_bar * pb - b_bar * pa) / a_bar;
        scale * alpha.min(b_bar).sqrt() * slack.min(gap)
    }
}

/// The closed-form (alpha, beta) that equalizes both boundary slacks:
/// with `r = (P_A/P_B)^2` and `q = (Q_B/Q_A)^2`,
/// `alpha = (rq - r)/(rq - 1)` and `beta = (q - 1)/(rq - 1)`.
pub fn special_alpha_beta(rates: RatePair) -> Result<(f64, f64), DecomposeError> {
    let (pa, pb) = (rates.p_a, rates.p_b);
    if !(pa > 0.0 && pa < 1.0 && pb > 0.0 && pb < 1.0) {
        return Err(DecomposeError::DegenerateRate);
    }
    if pa == pb {
        return Err(DecomposeError::Tie);
    }
    if pa < pb {
        return Err(DecomposeError::Domain("table must favor arm A"));
    }
    let r = (pa / pb) * (pa / pb);
    let q = ((1.0 - pb) / (1.0 - pa)) * ((1.0 - pb) / (1.0 - pa));
    let denom = r * q - 1.0;
    Ok(((r * q - r) / denom, (q - 1.0) / denom))
}

/// The printed closed-form ceiling at the special (alpha, beta) point.
///
/// Reference output only: it is looser than [`cprime_ceiling_sufficient`]
/// at the same point and is never used as a feasibility test here. Kept
/// because it is the form quoted alongside worked examples elsewhere.
pub fn cprime_ceiling_printed(rates: RatePair) -> Result<f64, DecomposeError> {
    let (pa, pb) = (rates.p_a, rates.p_b);
    if !(pa > 0.0 && pa < 1.0 && pb > 0.0 && pb < 1.0) {
        return Err(DecomposeError::DegenerateRate);
    }
    if pa == pb {
        return Err(DecomposeError::Tie);
    }
    if pa < pb {
        return Err(DecomposeError::Domain("table must favor arm A"));
    }
    let gamma = rates.gamma;
    let scale = 2.0 * (gamma * (1.0 - gamma)).sqrt();
    let r = (pa / pb) * (pa / pb);
    let q = ((1.0 - pb) / (1.0 - pa)) * ((1.0 - pb) / (1.0 - pa));
    let denom = r * q - 1.0;
    let value = if pa + pb >= 1.0 {
        scale * (q - 1.0) * (pa - pb) * (pb / pa) / denom
    } else {
        scale * (r - 1.0) * (pa - pb) * ((1.0 - pa) / (1.0 - pb)) / denom
    };
    Ok(value)
}

const FIXED_POINT_MAX_ITER: usize = 200;
const FIXED_POINT_TOL: f64 = 1e-12;
const RATE_SLACK: f64 = 1e-12;

struct SubRates {
    p_a1: f64,
    p_a2: f64,
    p_b1: f64,
    p_b2: f64,
    k1: f64,
    k2: f64,
    sigma_alpha: f64,
    sigma_beta: f64,
}

fn sub_rates(
    rates: RatePair,
    alpha: f64,
    beta: f64,
    c_prime: f64,
    sigma_1: f64,
    sigma_2: f64,
) -> SubRates {
    let (a_bar, b_bar) = (1.0 - alpha, 1.0 - beta);
    let d = alpha - beta;
    let k1 = (b_bar * rates.p_a - a_bar * rates.p_b) / d;
    let k2 = (alpha * rates.p_b - beta * rates.p_a) / d;
    let sigma_alpha = alpha * sigma_1 + a_bar * sigma_2;
    let sigma_beta = beta * sigma_1 + b_bar * sigma_2;
    SubRates {
        p_a1: k1 + a_bar / d * c_prime * sigma_beta,
        p_a2: k2 - alpha / d * c_prime * sigma_beta,
        p_b1: k1 + b_bar / d * c_prime * sigma_alpha,
        p_b2: k2 - beta / d * c_prime * sigma_alpha,
        k1,
        k2,
        sigma_alpha,
        sigma_beta,
    }
}

/// Part-level confidence scale from clamped sub-rates, with trial weights
/// relative to the whole table.
fn sigma_from_rates(p_a: f64, p_b: f64, w_a: f64, w_b: f64) -> f64 {
    let pa = p_a.clamp(0.0, 1.0);
    let pb = p_b.clamp(0.0, 1.0);
    (pa * (1.0 - pa) / w_a + pb * (1.0 - pb) / w_b).sqrt()
}

fn build_parts(
    table: &TrialTable,
    alpha: f64,
    beta: f64,
    p_a1: f64,
    p_b1: f64,
    p_a2: f64,
    p_b2: f64,
) -> Result<(FractionalTable, FractionalTable), ModelError> {
    let n_a = table.trials_a() as f64;
    let n_b = table.trials_b() as f64;
    let (n_a1, n_a2) = (alpha * n_a, (1.0 - alpha) * n_a);
    let (n_b1, n_b2) = (beta * n_b, (1.0 - beta) * n_b);
    let part1 = FractionalTable::new(p_a1 * n_a1, n_a1, p_b1 * n_b1, n_b1)?;
    let part2 = FractionalTable::new(p_a2 * n_a2, n_a2, p_b2 * n_b2, n_b2)?;
    Ok((part1, part2))
}

/// Solve the sub-rate system for the given split fractions and common
/// confidence, then verify the result on the realized sub-tables.
///
/// The system is implicit because each part's scale depends on its own
/// rates. Iteration: start from `sigma_1 = sigma_2 = 1`, alternate the
/// closed-form rates with recomputed scales, damp updates by half once
/// an oscillation appears, stop when the scales move less than 1e-12, and
/// give up after 200 rounds.
pub fn solve_reversal(
    table: &TrialTable,
    alpha: f64,
    beta: f64,
    c_prime: f64,
) -> Result<ReversalSolution, DecomposeError> {
    if !(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0) {
        return Err(DecomposeError::Domain(
            "alpha and beta must lie strictly inside (0, 1)",
        ));
    }
    if alpha == beta {
        return Err(DecomposeError::Degenerate);
    }
    if !(c_prime >= 0.0) || !c_prime.is_finite() {
        return Err(DecomposeError::Domain("c_prime must be finite and nonnegative"));
    }
    let r = table.rates();
    if !(r.p_a > 0.0 && r.p_a < 1.0 && r.p_b > 0.0 && r.p_b < 1.0) {
        return Err(DecomposeError::DegenerateRate);
    }
    if table.direction() != Direction::AAhead {
        return Err(DecomposeError::Infeasible);
    }
    if !necessary_feasible(r, alpha, beta) {
        return Err(DecomposeError::Infeasible);
    }

    let gamma = r.gamma;
    let (w_a1, w_b1) = (alpha * gamma, beta * (1.0 - gamma));
    let (w_a2, w_b2) = ((1.0 - alpha) * gamma, (1.0 - beta) * (1.0 - gamma));

    let mut sigma_1 = 1.0;
    let mut sigma_2 = 1.0;
    let mut damp = 1.0;
    let mut prev_raw: Option<(f64, f64)> = None;
    let mut converged = false;

    for _ in 0..FIXED_POINT_MAX_ITER {
        let trial = sub_rates(r, alpha, beta, c_prime, sigma_1, sigma_2);
        let target_1 = sigma_from_rates(trial.p_a1, trial.p_b1, w_a1, w_b1);
        let target_2 = sigma_from_rates(trial.p_a2, trial.p_b2, w_a2, w_b2);
        let raw = (target_1 - sigma_1, target_2 - sigma_2);
        if let Some(prev) = prev_raw {
            if raw.0 * prev.0 < 0.0 || raw.1 * prev.1 < 0.0 {
                damp = 0.5;
            }
        }
        prev_raw = Some(raw);
        let step_1 = damp * raw.0;
        let step_2 = damp * raw.1;
        sigma_1 += step_1;
        sigma_2 += step_2;
        if step_1.abs().max(step_2.abs()) < FIXED_POINT_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(DecomposeError::NoConvergence {
            iterations: FIXED_POINT_MAX_ITER,
        });
    }
    let state = sub_rates(r, alpha, beta, c_prime, sigma_1, sigma_2);

    let rates_ok = |p: f64| p >= -RATE_SLACK && p <= 1.0 + RATE_SLACK;
    if !(rates_ok(state.p_a1) && rates_ok(state.p_a2) && rates_ok(state.p_b1) && rates_ok(state.p_b2))
    {
        return Err(DecomposeError::Infeasible);
    }
    let clamp = |p: f64| p.clamp(0.0, 1.0);
    let (p_a1, p_a2) = (clamp(state.p_a1), clamp(state.p_a2));
    let (p_b1, p_b2) = (clamp(state.p_b1), clamp(state.p_b2));
    let interior = |p: f64| p > 0.0 && p < 1.0;
    if !(interior(p_a1) && interior(p_a2) && interior(p_b1) && interior(p_b2)) {
        // A boundary sub-rate has no confidence scale to verify against.
        return Err(DecomposeError::Infeasible);
    }

    let parts = build_parts(table, alpha, beta, p_a1, p_b1, p_a2, p_b2)?;
    let n_total = table.total_trials() as f64;
    let realized = (
        asymptotics::subtrial_confidence(&parts.0, n_total, 1)
            .map_err(|_| DecomposeError::Infeasible)?,
        asymptotics::subtrial_confidence(&parts.1, n_total, 2)
            .map_err(|_| DecomposeError::Infeasible)?,
    );
    // The lean check gets an ulp of slack: at C' = 0 the parts tie by
    // construction and recovering rates from cells can cross by rounding.
    let verified = realized.0.c_prime >= c_prime - 1e-9
        && realized.1.c_prime >= c_prime - 1e-9
        && parts.0.p_b() >= parts.0.p_a() - 1e-12
        && parts.1.p_b() >= parts.1.p_a() - 1e-12;

    Ok(ReversalSolution {
        plan: DecompositionPlan {
            alpha,
            beta,
            c_prime,
            k1: state.k1,
            k2: state.k2,
            sigma_1,
            sigma_2,
            sigma_alpha: state.sigma_alpha,
            sigma_beta: state.sigma_beta,
            p_a1,
            p_a2,
            p_b1,
            p_b2,
        },
        parts,
        realized_confidences: realized,
        verified,
    })
}

const BISECT_TOL: f64 = 1e-9;

/// Largest verified common confidence at one (alpha, beta), by bisection
/// on C' with direct solve-and-verify as the predicate. Returns the best
/// solution when some C' > 0 verifies.
fn best_at_point(table: &TrialTable, rates: RatePair, alpha: f64, beta: f64) -> Option<(f64, ReversalSolution)> {
    if !necessary_feasible(rates, alpha, beta) {
        return None;
    }
    let base = solve_reversal(table, alpha, beta, 0.0).ok()?;
    if !base.verified {
        return None;
    }
    let feasible = |c: f64| {
        solve_reversal(table, alpha, beta, c)
            .map(|s| s.verified)
            .unwrap_or(false)
    };
    let seed = cprime_ceiling_exact(
        rates,
        alpha,
        beta,
        base.plan.sigma_alpha,
        base.plan.sigma_beta,
    );
    if !(seed > 1e-12) || !seed.is_finite() {
        return None;
    }
    let mut lo = 0.0;
    let mut hi = seed;
    if feasible(hi) {
        // The ceiling used frozen scales; the true frontier may sit higher.
        for _ in 0..60 {
            lo = hi;
            hi *= 2.0;
            if !feasible(hi) {
                break;
            }
        }
    }
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if !(lo > 0.0) {
        return None;
    }
    let best = solve_reversal(table, alpha, beta, lo).ok()?;
    if !best.verified {
        return None;
    }
    Some((lo, best))
}

/// Search for the split maximizing the common confidence with which both
/// parts favor B: a 101-point-per-axis lattice over (alpha, beta), twice
/// refined tenfold around the incumbent, bisecting on C' at each point.
/// Fully deterministic; lattice ties go to the smallest alpha, then the
/// smallest beta.
pub fn maximize_reversal(table: &TrialTable) -> Result<ReversalSolution, DecomposeError> {
    let r = table.rates();
    if !(r.p_a > 0.0 && r.p_a < 1.0 && r.p_b > 0.0 && r.p_b < 1.0) {
        return Err(DecomposeError::DegenerateRate);
    }
    if table.direction() != Direction::AAhead {
        return Err(DecomposeError::Infeasible);
    }

    let mut best: Option<(f64, f64, f64, ReversalSolution)> = None;
    let consider = |alpha: f64, beta: f64, table: &TrialTable, best: &mut Option<(f64, f64, f64, ReversalSolution)>| {
        if !(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0) || alpha == beta {
            return;
        }
        if let Some((c, solution)) = best_at_point(table, r, alpha, beta) {
            let improves = match best {
                None => true,
                Some((best_c, _, _, _)) => c > *best_c,
            };
            if improves {
                *best = Some((c, alpha, beta, solution));
            }
        }
    };

    let coarse = 0.01;
    for i in 1..100u32 {
        for j in 1..100u32 {
            consider(f64::from(i) * coarse, f64::from(j) * coarse, table, &mut best);
        }
    }

    let mut step = coarse;
    for _ in 0..2 {
        let (center_a, center_b) = match &best {
            Some((_, a, b, _)) => (*a, *b),
            None => break,
        };
        let fine = step / 10.0;
        for di in -50..=50i32 {
            let alpha = (center_a + f64::from(di) * fine).clamp(1e-6, 1.0 - 1e-6);
            for dj in -50..=50i32 {
                let beta = (center_b + f64::from(dj) * fine).clamp(1e-6, 1.0 - 1e-6);
                consider(alpha, beta, table, &mut best);
            }
        }
        step = fine;
    }

    match best {
        Some((_, _, _, solution)) => Ok(solution),
        None => Err(DecomposeError::Infeasible),
    }
}

fn checked_round(x: f64) -> Result<u64, DecomposeError> {
    let rounded = x.round();
    if (x - rounded).abs() > 1e-6 || rounded < 0.0 {
        return Err(DecomposeError::Domain(
            "part cells must sum to whole nonnegative counts",
        ));
    }
    Ok(rounded as u64)
}

/// Round fractional parts to whole counts without disturbing any of the
/// four reconstructed totals: part 1 takes the half-up rounding of each
/// cell, part 2 takes the remainder, and success counts are pulled back
/// into range when rounding would overfill an arm.
pub fn integerize(
    parts: &(FractionalTable, FractionalTable),
) -> Result<IntegerizedParts, DecomposeError> {
    let (p1, p2) = parts;
    let n_a = checked_round(p1.trials_a() + p2.trials_a())?;
    let n_b = checked_round(p1.trials_b() + p2.trials_b())?;
    let s_a = checked_round(p1.successes_a() + p2.successes_a())?;
    let s_b = checked_round(p1.successes_b() + p2.successes_b())?;

    fn split_arm(trials_1: f64, successes_1: f64, trials: u64, successes: u64) -> (u64, u64, u64, u64) {
        let t1 = (trials_1.round().max(0.0) as u64).min(trials);
        let t2 = trials - t1;
        let lo = successes.saturating_sub(t2);
        let hi = t1.min(successes);
        let s1 = (successes_1.round().max(0.0) as u64).clamp(lo, hi);
        (t1, t2, s1, successes - s1)
    }

    let (n_a1, n_a2, s_a1, s_a2) = split_arm(p1.trials_a(), p1.successes_a(), n_a, s_a);
    let (n_b1, n_b2, s_b1, s_b2) = split_arm(p1.trials_b(), p1.successes_b(), n_b, s_b);

    let part1 = TrialTable::new(s_a1, n_a1, s_b1, n_b1)?;
    let part2 = TrialTable::new(s_a2, n_a2, s_b2, n_b2)?;

    let n_total = (n_a + n_b) as f64;
    let confidence = |t: &TrialTable, index: u8| {
        asymptotics::subtrial_confidence(&t.to_fractional(), n_total, index).ok()
    };
    let realized = (confidence(&part1, 1), confidence(&part2, 2));
    let leans_b = |t: &TrialTable| {
        u128::from(t.successes_b()) * u128::from(t.trials_a())
            >= u128::from(t.successes_a()) * u128::from(t.trials_b())
    };
    let verified = realized.0.is_some()
        && realized.1.is_some()
        && leans_b(&part1)
        && leans_b(&part2);

    Ok(IntegerizedParts {
        parts: (part1, part2),
        realized_confidences: realized,
        verified,
    })
}
