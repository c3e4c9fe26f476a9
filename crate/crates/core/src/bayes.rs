//! Exact posterior probabilities for binomial rates under a uniform prior.
//!
//! Observing S successes in N trials with a flat prior on the rate p gives
//! the Beta(S + 1, N - S + 1) posterior. Everything here is an exact
//! consequence of that posterior: tail masses, credible masses, and the
//! probability that one arm's rate exceeds the other's,
//!
//! ```text
//! Pr{p_A >= p_B} = sum_{j=0}^{F} C(S+1+j, S_A) C(F-j, F_A) / C(N+2, N_A+1)
//! ```
//!
//! with S, F, N the pooled successes, failures, and trials. The sum's terms
//! are all positive, so it is evaluated in one O(F) pass in log space with a
//! running maximum and compensated accumulation.

use serde::Serialize;
use thiserror::Error;

use crate::model::TrialTable;
use crate::special::{self, LogSumExp, SpecialError};

/// Total-trials cap for the exact superiority sum. Past this point the
/// caller should either use the normal approximation or explicitly opt in
/// to the uncapped sum.
pub const EXACT_TOTAL_CAP: u64 = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BayesError {
    #[error("argument outside the operation's domain: {0}")]
    Domain(&'static str),
    #[error("total trials {total} exceed the exact-sum cap {cap}; use the normal approximation or the uncapped variant")]
    TooLarge { total: u64, cap: u64 },
    #[error(transparent)]
    Special(#[from] SpecialError),
}

/// First and second moments of the posterior rate difference p_A - p_B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PosteriorMoments {
    pub mean_diff: f64,
    pub var_diff: f64,
}

fn check_counts(successes: u64, trials: u64) -> Result<(), BayesError> {
    if successes > trials {
        return Err(BayesError::Domain("successes exceed trials"));
    }
    if trials > crate::model::MAX_COUNT {
        return Err(BayesError::Domain("trials exceed the representable limit"));
    }
    Ok(())
}

/// Posterior probability that the success rate is at least `threshold`,
/// `1 - I_t(S + 1, N - S + 1)`.
pub fn prob_rate_at_least(successes: u64, trials: u64, threshold: f64) -> Result<f64, BayesError> {
    check_counts(successes, trials)?;
    if !(0.0..=1.0).contains(&threshold) {
        return Err(BayesError::Domain("threshold must lie in [0, 1]"));
    }
    let a = successes as f64 + 1.0;
    let b = (trials - successes) as f64 + 1.0;
    Ok(1.0 - special::regularized_incomplete_beta(threshold, a, b)?)
}

/// Posterior probability that the rate is at least one half, evaluated as
/// the closed binomial sum `1 - 2^{-(N+1)} sum_{j=0}^{N-S} C(N+1, j)`.
///
/// Runs in O(N - S); prefer [`prob_rate_at_least`] for very large tables.
pub fn prob_rate_at_least_half_sum(successes: u64, trials: u64) -> Result<f64, BayesError> {
    check_counts(successes, trials)?;
    let n_plus_1 = trials + 1;
    let ln_scale = (n_plus_1 as f64) * std::f64::consts::LN_2;
    let mut acc = LogSumExp::new();
    for j in 0..=(trials - successes) {
        acc.push(special::log_binomial(n_plus_1, j)? - ln_scale);
    }
    Ok(1.0 - acc.total())
}

/// Posterior mass of the interval `S/N +- epsilon / sqrt(N)`, clipped
/// to [0, 1].
pub fn credible_mass(successes: u64, trials: u64, epsilon: f64) -> Result<f64, BayesError> {
    check_counts(successes, trials)?;
    if trials == 0 {
        return Err(BayesError::Domain("credible_mass requires trials >= 1"));
    }
    if !(epsilon >= 0.0) {
        return Err(BayesError::Domain("epsilon must be nonnegative"));
    }
    let n = trials as f64;
    let center = successes as f64 / n;
    let half_width = epsilon / n.sqrt();
    let lo = (center - half_width).max(0.0);
    let hi = (center + half_width).min(1.0);
    let a = successes as f64 + 1.0;
    let b = (trials - successes) as f64 + 1.0;
    Ok(special::regularized_incomplete_beta(hi, a, b)?
        - special::regularized_incomplete_beta(lo, a, b)?)
}

/// Probability that a Binomial(N, p) count lands within `sqrt(N) * epsilon`
/// of its mean: the terms `j = floor(Np - sqrt(N) eps)` through
/// `floor(Np + sqrt(N) eps)`, window clamped to [0, N].
pub fn binomial_interval_prob(trials: u64, p: f64, epsilon: f64) -> Result<f64, BayesError> {
    if trials == 0 || trials > crate::model::MAX_COUNT {
        return Err(BayesError::Domain("trials must lie in [1, 2^53 - 1]"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(BayesError::Domain("p must lie in [0, 1]"));
    }
    if !(epsilon >= 0.0) {
        return Err(BayesError::Domain("epsilon must be nonnegative"));
    }
    let n = trials as f64;
    let half_width = n.sqrt() * epsilon;
    let lo_f = (n * p - half_width).floor();
    let hi_f = (n * p + half_width).floor();
    let lo = if lo_f < 0.0 { 0 } else { lo_f as u64 };
    let hi = if hi_f >= n { trials } else { hi_f as u64 };
    // Degenerate p puts all mass on a single count.
    if p == 0.0 {
        return Ok(if lo == 0 { 1.0 } else { 0.0 });
    }
    if p == 1.0 {
        return Ok(if hi == trials { 1.0 } else { 0.0 });
    }
    let (ln_p, ln_q) = (p.ln(), (-p).ln_1p());
    let mut acc = LogSumExp::new();
    for j in lo..=hi {
        acc.push(special::log_binomial(trials, j)? + j as f64 * ln_p + (trials - j) as f64 * ln_q);
    }
    Ok(acc.total().min(1.0))
}

/// Exact posterior probability that arm A's rate is at least arm B's.
///
/// Errors with `TooLarge` when the table's total trials exceed
/// [`EXACT_TOTAL_CAP`]; see [`prob_a_beats_b_exact_uncapped`] to override.
pub fn prob_a_beats_b_exact(table: &TrialTable) -> Result<f64, BayesError> {
    let total = table.total_trials();
    if total > EXACT_TOTAL_CAP {
        return Err(BayesError::TooLarge {
            total,
            cap: EXACT_TOTAL_CAP,
        });
    }
    prob_a_beats_b_exact_uncapped(table)
}

/// The exact superiority sum with no size cap. Runtime is O(total
/// failures); callers opting in accept the cost.
pub fn prob_a_beats_b_exact_uncapped(table: &TrialTable) -> Result<f64, BayesError> {
    let s_a = table.successes_a();
    let f_a = table.failures_a();
    let f_b = table.failures_b();
    let s = s_a + table.successes_b();
    let f = f_a + f_b;
    let n = table.total_trials();

    let ln_denom = special::log_binomial(n + 2, table.trials_a() + 1)?;
    let mut acc = LogSumExp::new();
    // Terms with j > F_B vanish: C(F - j, F_A) = 0 once F - j < F_A.
    for j in 0..=f_b {
        let ln_term =
            special::log_binomial(s + 1 + j, s_a)? + special::log_binomial(f - j, f_a)? - ln_denom;
        acc.push(ln_term);
    }
    Ok(acc.total().min(1.0))
}

/// Mean and variance of the posterior rate difference p_A - p_B, one
/// beta-posterior term per arm.
pub fn posterior_diff_moments(table: &TrialTable) -> PosteriorMoments {
    fn arm(successes: u64, trials: u64) -> (f64, f64) {
        let s = successes as f64;
        let n = trials as f64;
        let mean = (s + 1.0) / (n + 1.0);
        let var = (s + 1.0) * (n + 1.0 - s) / ((n + 1.0) * (n + 1.0) * (n + 2.0));
        (mean, var)
    }
    let (mean_a, var_a) = arm(table.successes_a(), table.trials_a());
    let (mean_b, var_b) = arm(table.successes_b(), table.trials_b());
    PosteriorMoments {
        mean_diff: mean_a - mean_b,
        var_diff: var_a + var_b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TrialTable;

    fn table(sa: u64, na: u64, sb: u64, nb: u64) -> TrialTable {
        TrialTable::new(sa, na, sb, nb).unwrap()
    }

    fn assert_close(got: f64, want: f64, tol: f64) {
        assert!(
            (got - want).abs() <= tol,
            "got {got:.17e}, want {want:.17e}, diff {:.3e}",
            (got - want).abs()
        );
    }

    #[test]
    fn tail_mass_small_cases() {
        assert_close(prob_rate_at_least(1, 1, 0.5).unwrap(), 0.75, 1e-14);
        assert_close(prob_rate_at_least(0, 1, 0.5).unwrap(), 0.25, 1e-14);
        assert_close(prob_rate_at_least(3, 7, 0.0).unwrap(), 1.0, 0.0);
        assert_close(prob_rate_at_least(3, 7, 1.0).unwrap(), 0.0, 0.0);
    }

    #[test]
    fn tail_mass_domain() {
        assert!(prob_rate_at_least(2, 1, 0.5).is_err());
        assert!(prob_rate_at_least(1, 2, 1.5).is_err());
        assert!(prob_rate_at_least(1, 2, f64::NAN).is_err());
    }

    #[test]
    fn half_sum_reference_values() {
        // Exact rational evaluations of the binomial sum.
        assert_close(prob_rate_at_least_half_sum(1, 1).unwrap(), 0.75, 1e-15);
        assert_close(prob_rate_at_least_half_sum(0, 0).unwrap(), 0.5, 1e-15);
        assert_close(prob_rate_at_least_half_sum(0, 1).unwrap(), 0.25, 1e-15);
        assert_close(prob_rate_at_least_half_sum(10, 20).unwrap(), 0.5, 1e-13);
        assert_close(
            prob_rate_at_least_half_sum(15, 20).unwrap(),
            0.9866981506347656,
            1e-13,
        );
        assert_close(
            prob_rate_at_least_half_sum(60, 100).unwrap(),
            0.9769779665353286,
            1e-13,
        );
        assert_close(
            prob_rate_at_least_half_sum(820, 1600).unwrap(),
            0.8412691357394887,
            1e-12,
        );
    }

    #[test]
    fn half_sum_matches_beta_tail_exhaustively() {
        // Two very different evaluation routes for the same posterior mass.
        for n in 0..=30u64 {
            for s in 0..=n {
                let via_sum = prob_rate_at_least_half_sum(s, n).unwrap();
                let via_beta = prob_rate_at_least(s, n, 0.5).unwrap();
                assert_close(via_sum, via_beta, 1e-12);
            }
        }
    }

    #[test]
    fn credible_mass_cases() {
        assert_close(credible_mass(1, 1, 0.5).unwrap(), 0.75, 1e-14);
        assert_close(
            credible_mass(900, 1000, 2.0).unwrap(),
            0.9999999943395109,
            1e-12,
        );
        assert_close(credible_mass(5, 10, 0.0).unwrap(), 0.0, 0.0);
        // A window wide enough to cover [0, 1] has full mass.
        assert_close(credible_mass(5, 10, 4.0).unwrap(), 1.0, 1e-12);
        assert!(credible_mass(5, 10, -1.0).is_err());
    }

    #[test]
    fn binomial_interval_cases() {
        assert_close(binomial_interval_prob(1, 0.5, 0.4).unwrap(), 0.5, 1e-15);
        assert_close(binomial_interval_prob(2, 0.5, 0.0).unwrap(), 0.5, 1e-15);
        assert_close(
            binomial_interval_prob(100, 0.3, 1.0).unwrap(),
            0.9786143845174190,
            1e-13,
        );
        assert_close(
            binomial_interval_prob(1000, 0.5, 2.0).unwrap(),
            0.9999489789330106,
            1e-12,
        );
        assert_close(binomial_interval_prob(50, 0.0, 0.1).unwrap(), 1.0, 0.0);
        assert_close(binomial_interval_prob(50, 1.0, 0.1).unwrap(), 1.0, 0.0);
        // epsilon = sqrt(N) covers every count.
        assert_close(
            binomial_interval_prob(30, 0.7, 30f64.sqrt()).unwrap(),
            1.0,
            1e-13,
        );
        assert!(binomial_interval_prob(0, 0.5, 1.0).is_err());
        assert!(binomial_interval_prob(10, 1.5, 1.0).is_err());
    }

    #[test]
    fn superiority_small_rational_cases() {
        // Exact rational sums: 5/6, 1/6, 53/70, 31/35.
        assert_close(
            prob_a_beats_b_exact(&table(1, 1, 0, 1)).unwrap(),
            5.0 / 6.0,
            1e-14,
        );
        assert_close(
            prob_a_beats_b_exact(&table(0, 1, 1, 1)).unwrap(),
            1.0 / 6.0,
            1e-14,
        );
        assert_close(
            prob_a_beats_b_exact(&table(2, 3, 1, 3)).unwrap(),
            53.0 / 70.0,
            1e-14,
        );
        assert_close(
            prob_a_beats_b_exact(&table(2, 2, 1, 3)).unwrap(),
            31.0 / 35.0,
            1e-14,
        );
    }

    #[test]
    fn superiority_reference_values() {
        let cases = [
            (5u64, 10u64, 5u64, 10u64, 0.5),
            (60, 100, 50, 100, 0.9214262485064177),
            (10, 20, 5, 20, 0.9445509292900703),
            (3, 10, 7, 10, 0.043054468751063175),
            (900, 1000, 800, 1000, 0.9999999998540675),
        ];
        for (sa, na, sb, nb, want) in cases {
            assert_close(
                prob_a_beats_b_exact(&table(sa, na, sb, nb)).unwrap(),
                want,
                1e-12,
            );
        }
    }

    #[test]
    fn superiority_symmetric_tables_are_even_bets() {
        for (s, n) in [(1u64, 2u64), (7, 19), (50, 100)] {
            assert_close(prob_a_beats_b_exact(&table(s, n, s, n)).unwrap(), 0.5, 1e-12);
        }
        // Longer sums accumulate a little more log-space roundoff.
        assert_close(
            prob_a_beats_b_exact(&table(313, 841, 313, 841)).unwrap(),
            0.5,
            5e-12,
        );
    }

    #[test]
    fn superiority_swap_complement() {
        // The posterior is continuous, so Pr{A >= B} + Pr{B >= A} = 1.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..200 {
            let na = 1 + next() % 100;
            let nb = 1 + next() % 100;
            let sa = next() % (na + 1);
            let sb = next() % (nb + 1);
            let t = table(sa, na, sb, nb);
            let p = prob_a_beats_b_exact(&t).unwrap();
            let q = prob_a_beats_b_exact(&t.swap_arms()).unwrap();
            assert_close(p + q, 1.0, 1e-10);
        }
    }

    #[test]
    fn superiority_monotone_in_successes() {
        let mut prev = -1.0;
        for sa in 0..=6u64 {
            let p = prob_a_beats_b_exact(&table(sa, 6, 3, 6)).unwrap();
            assert!(p > prev, "not strictly increasing at sa = {sa}");
            prev = p;
        }
    }

    #[test]
    fn superiority_cap() {
        let too_big = table(500, 50_001, 400, 50_000);
        assert_eq!(
            prob_a_beats_b_exact(&too_big),
            Err(BayesError::TooLarge {
                total: 100_001,
                cap: EXACT_TOTAL_CAP
            })
        );
        let v = prob_a_beats_b_exact_uncapped(&too_big).unwrap();
        assert!((0.0..=1.0).contains(&v));
        // At the cap itself the capped call still runs.
        assert!(prob_a_beats_b_exact(&table(500, 50_000, 400, 50_000)).is_ok());
    }

    #[test]
    fn moments_cases() {
        let m = posterior_diff_moments(&table(1, 1, 1, 1));
        assert_eq!(m.mean_diff, 0.0);
        assert_close(m.var_diff, 1.0 / 3.0, 1e-16);

        let m = posterior_diff_moments(&table(900, 1000, 800, 1000));
        assert_close(m.mean_diff, 100.0 / 1001.0, 1e-15);
        assert_close(m.var_diff, 126001.0 / 502002501.0, 1e-18);

        let m = posterior_diff_moments(&table(60, 100, 50, 100));
        assert_close(m.mean_diff, 10.0 / 101.0, 1e-15);
        assert_close(m.var_diff, 2551.0 / 520251.0, 1e-17);
    }

    #[test]
    fn moments_variance_positive() {
        for (sa, na, sb, nb) in [(0u64, 1u64, 1u64, 1u64), (0, 50, 50, 50), (3, 9, 0, 4)] {
            let m = posterior_diff_moments(&table(sa, na, sb, nb));
            assert!(m.var_diff > 0.0);
        }
    }
}
