//! Independent brute-force checks for the analytic routines.
//!
//! Nothing here shares an algorithm with the code it audits. The
//! superiority probability is recomputed three more ways: nested adaptive
//! quadrature over the posterior density, the same finite sum carried out
//! in exact big-rational arithmetic, and seeded Monte Carlo draws from the
//! two beta posteriors. The reversal search is rerun as a flat exhaustive
//! sweep over a split-fraction lattice. Every verdict comes back as an
//! [`OracleReport`] naming the method and its error budget, so a headline
//! number can be confirmed without trusting the code that produced it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Beta, Distribution};
use serde::Serialize;
use thiserror::Error;

use crate::decompose;
use crate::model::TrialTable;
use crate::special;

/// Total-trials cap for the quadrature oracle; past this the posterior is
/// narrow enough that the fixed absolute tolerance is no longer a
/// meaningful guarantee.
pub const QUADRATURE_TOTAL_CAP: u64 = 200;

/// Total-trials cap for the exact-rational oracle. The sum itself is exact
/// at any size; the cap only bounds big-integer growth and runtime.
pub const RATIONAL_TOTAL_CAP: u64 = 300;

/// Fewest Monte Carlo draws accepted; below this the 3-standard-error band
/// is too wide to confirm anything.
pub const MIN_MC_SAMPLES: u64 = 10_000;

/// Largest lattice the exhaustive reversal sweep will take.
pub const MAX_GRID_LATTICE: u32 = 41;

const QUADRATURE_TOL: f64 = 1e-10;
const QUADRATURE_PANELS: usize = 16;
const QUADRATURE_MAX_DEPTH: u32 = 40;
const GRID_BISECT_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("total trials {total} exceed this oracle's cap of {cap}")]
    TooLarge { total: u64, cap: u64 },
}

/// Which independent route produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    Quadrature,
    Rational,
    MonteCarlo,
    Grid,
}

/// One oracle verdict.
///
/// `error_estimate` is an upper bound on `|value - truth|` for the
/// deterministic methods (zero for the exact-rational route, up to the
/// one rounding that puts the value into an `f64`) and a 3-standard-error
/// half-width for Monte Carlo. The grid sweep reports its bisection
/// tolerance: the value is the lattice optimum to within that much, with
/// no claim about how far the continuum optimum sits above it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleReport {
    pub value: f64,
    pub method: OracleMethod,
    pub error_estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Pr{p_A >= p_B} by nested quadrature over the posterior density:
/// the outer integral runs adaptive Simpson on
/// `I_p(S_B + 1, F_B + 1) * p^{S_A} (1 - p)^{F_A} / B(S_A + 1, F_A + 1)`,
/// with the inner tail evaluated directly as a regularized incomplete
/// beta rather than summed.
pub fn prob_a_beats_b_quadrature(table: &TrialTable) -> Result<OracleReport, OracleError> {
    let total = table.total_trials();
    if total > QUADRATURE_TOTAL_CAP {
        return Err(OracleError::TooLarge {
            total,
            cap: QUADRATURE_TOTAL_CAP,
        });
    }
    let s_a = table.successes_a() as f64;
    let f_a = table.failures_a() as f64;
    let s_b = table.successes_b() as f64;
    let f_b = table.failures_b() as f64;
    // 1 / B(S_A + 1, F_A + 1) = (N_A + 1) C(N_A, S_A).
    let ln_norm = ((table.trials_a() + 1) as f64).ln()
        + special::log_binomial(table.trials_a(), table.successes_a())
            .expect("counts were validated by the table constructor");

    let integrand = |p: f64| -> f64 {
        let mut ln_density = ln_norm;
        if s_a > 0.0 {
            ln_density += s_a * p.ln();
        }
        if f_a > 0.0 {
            ln_density += f_a * (-p).ln_1p();
        }
        let density = ln_density.exp();
        if density == 0.0 {
            return 0.0;
        }
        let tail = special::regularized_incomplete_beta(p, s_b + 1.0, f_b + 1.0)
            .expect("arguments are positive and p lies in [0, 1]");
        tail * density
    };

    // A fixed initial split keeps a symmetric or sharply peaked density
    // from fooling the very first Simpson error estimate; the posterior's
    // width is at least ~N^(-1/2), so sixteen panels resolve every peak
    // the cap admits.
    let mut value = 0.0;
    let mut err = 0.0;
    let panel_tol = QUADRATURE_TOL / QUADRATURE_PANELS as f64;
    for k in 0..QUADRATURE_PANELS {
        let a = k as f64 / QUADRATURE_PANELS as f64;
        let b = (k + 1) as f64 / QUADRATURE_PANELS as f64;
        let fa = integrand(a);
        let fb = integrand(b);
        let m = 0.5 * (a + b);
        let fm = integrand(m);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        value += adaptive_simpson(
            &integrand,
            (a, m, b),
            (fa, fm, fb),
            whole,
            panel_tol,
            QUADRATURE_MAX_DEPTH,
            &mut err,
        );
    }
    Ok(OracleReport {
        value: value.min(1.0),
        method: OracleMethod::Quadrature,
        // Accepted-interval estimates, floored by the roundoff of the
        // ~1e3 inner incomplete-beta evaluations.
        error_estimate: err.max(1e-12),
        seed: None,
    })
}

fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    (a, m, b): (f64, f64, f64),
    (fa, fm, fb): (f64, f64, f64),
    whole: f64,
    tol: f64,
    depth: u32,
    err: &mut f64,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let h = b - a;
    let left = h / 12.0 * (fa + 4.0 * flm + fm);
    let right = h / 12.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // Accepting at `tol` rather than the textbook `15 tol` trades depth
    // for a fifteen-fold safety margin on the Richardson-corrected error.
    if depth == 0 || delta.abs() <= tol {
        *err += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, (a, lm, m), (fa, flm, fm), left, 0.5 * tol, depth - 1, err)
        + adaptive_simpson(f, (m, rm, b), (fm, frm, fb), right, 0.5 * tol, depth - 1, err)
}

fn big_binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    // Dividing after each multiplication keeps every intermediate an
    // integer: the first i factors form C(n - k + i, i).
    for i in 1..=k {
        acc *= BigInt::from(n - k + i);
        acc /= BigInt::from(i);
    }
    acc
}

/// Pr{p_A >= p_B} as an exact rational: the same finite sum the fast path
/// evaluates in log space, carried out over big integers with no dropped
/// terms. The only inexactness is the final rounding into an `f64`.
pub fn prob_a_beats_b_rational(table: &TrialTable) -> Result<OracleReport, OracleError> {
    let total = table.total_trials();
    if total > RATIONAL_TOTAL_CAP {
        return Err(OracleError::TooLarge {
            total,
            cap: RATIONAL_TOTAL_CAP,
        });
    }
    let s_a = table.successes_a();
    let f_a = table.failures_a();
    let s = s_a + table.successes_b();
    let f = f_a + table.failures_b();

    // The full range, vanishing terms included; the fast path is entitled
    // to skip them, a brute-force check is not.
    let mut numer = BigInt::zero();
    for j in 0..=f {
        numer += big_binomial(s + 1 + j, s_a) * big_binomial(f - j, f_a);
    }
    let denom = big_binomial(total + 2, table.trials_a() + 1);
    let value = BigRational::new(numer, denom)
        .to_f64()
        .expect("a ratio of nonnegative big integers converts");
    Ok(OracleReport {
        value,
        method: OracleMethod::Rational,
        error_estimate: 0.0,
        seed: None,
    })
}

/// Pr{p_A >= p_B} by drawing both rates from their beta posteriors and
/// counting.
///
/// Reproducibility contract: the stream is a single `ChaCha12Rng` keyed
/// with `seed_from_u64(seed)`; each round draws `p_A` first, then `p_B`,
/// through `rand_distr`'s beta sampler. The same seed and sample count
/// always reproduce the same report.
///
/// The band is three standard errors of the hit fraction, with half a
/// pseudo-count of smoothing so it stays open even when every draw lands
/// on one side.
///
/// # Panics
///
/// If `samples` is below [`MIN_MC_SAMPLES`].
pub fn prob_a_beats_b_montecarlo(table: &TrialTable, samples: u64, seed: u64) -> OracleReport {
    assert!(
        samples >= MIN_MC_SAMPLES,
        "at least {MIN_MC_SAMPLES} Monte Carlo samples are required"
    );
    let posterior = |successes: u64, trials: u64| {
        Beta::new(successes as f64 + 1.0, (trials - successes) as f64 + 1.0)
            .expect("both shape parameters are at least 1")
    };
    let beta_a = posterior(table.successes_a(), table.trials_a());
    let beta_b = posterior(table.successes_b(), table.trials_b());
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut hits: u64 = 0;
    for _ in 0..samples {
        let p_a: f64 = beta_a.sample(&mut rng);
        let p_b: f64 = beta_b.sample(&mut rng);
        if p_a >= p_b {
            hits += 1;
        }
    }
    let n = samples as f64;
    let value = hits as f64 / n;
    let smoothed = (hits as f64 + 0.5) / (n + 1.0);
    OracleReport {
        value,
        method: OracleMethod::MonteCarlo,
        error_estimate: 3.0 * (smoothed * (1.0 - smoothed) / n).sqrt(),
        seed: Some(seed),
    }
}

/// Best verified reversal confidence found by sweeping every lattice point
/// `(i/(L+1), j/(L+1))` of split fractions and bisecting the feasible
/// confidence range at each, using nothing from the refined search but the
/// public one-point solver. A table with no feasible point anywhere
/// (a tie, or B already ahead) reports zero.
///
/// # Panics
///
/// If `lattice` is zero or exceeds [`MAX_GRID_LATTICE`].
pub fn maximize_reversal_grid(table: &TrialTable, lattice: u32) -> OracleReport {
    assert!(
        lattice >= 1 && lattice <= MAX_GRID_LATTICE,
        "lattice must lie in 1..={MAX_GRID_LATTICE}"
    );
    let rates = table.rates();
    let mut best = 0.0f64;
    let step = 1.0 / (lattice + 1) as f64;
    for i in 1..=lattice {
        let alpha = i as f64 * step;
        for j in 1..=lattice {
            if i == j {
                continue;
            }
            let beta = j as f64 * step;
            if !decompose::necessary_feasible(rates, alpha, beta) {
                continue;
            }
            if let Some(c) = largest_verified_cprime(table, alpha, beta) {
                best = best.max(c);
            }
        }
    }
    OracleReport {
        value: best,
        method: OracleMethod::Grid,
        error_estimate: GRID_BISECT_TOL,
        seed: None,
    }
}

fn largest_verified_cprime(table: &TrialTable, alpha: f64, beta: f64) -> Option<f64> {
    let feasible = |c: f64| {
        matches!(
            decompose::solve_reversal(table, alpha, beta, c),
            Ok(solution) if solution.verified
        )
    };
    let base = match decompose::solve_reversal(table, alpha, beta, 0.0) {
        Ok(solution) if solution.verified => solution,
        _ => return None,
    };
    let mut lo = 0.0;
    let mut hi = decompose::cprime_ceiling_exact(
        table.rates(),
        alpha,
        beta,
        base.plan.sigma_alpha,
        base.plan.sigma_beta,
    )
    .max(1e-6);
    for _ in 0..60 {
        if !feasible(hi) {
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > GRID_BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo > 0.0).then_some(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayes;
    use crate::model::TrialTable;

    fn table(s_a: u64, n_a: u64, s_b: u64, n_b: u64) -> TrialTable {
        TrialTable::new(s_a, n_a, s_b, n_b).unwrap()
    }

    // Minimal xorshift so random-table tests stay seed-stable without
    // pulling an RNG into the fixtures.
    struct XorShift(u64);

    impl XorShift {
        fn next(&mut self) -> u64 {
            let mut x = self.0;
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            self.0 = x;
            x
        }

        fn below(&mut self, bound: u64) -> u64 {
            self.next() % bound
        }
    }

    #[test]
    fn quadrature_matches_closed_form_on_tiny_table() {
        // One success of one vs zero of one: integral of 2p(2p - p^2)/2
        // ... expanded by hand, 5/6.
        let report = prob_a_beats_b_quadrature(&table(1, 1, 0, 1)).unwrap();
        assert_eq!(report.method, OracleMethod::Quadrature);
        assert!((report.value - 5.0 / 6.0).abs() <= 1e-10);
        assert!(report.error_estimate <= 1e-10);
        assert_eq!(report.seed, None);
    }

    #[test]
    fn quadrature_symmetric_tables_are_half() {
        for t in [table(3, 7, 3, 7), table(60, 100, 60, 100), table(0, 4, 0, 4)] {
            let report = prob_a_beats_b_quadrature(&t).unwrap();
            assert!(
                (report.value - 0.5).abs() <= 1e-10,
                "symmetric table gave {}",
                report.value
            );
        }
    }

    #[test]
    fn quadrature_matches_exact_sum() {
        let t = table(10, 20, 5, 20);
        let report = prob_a_beats_b_quadrature(&t).unwrap();
        let exact = bayes::prob_a_beats_b_exact(&t).unwrap();
        assert!((report.value - exact).abs() <= 1e-8);
        assert!((report.value - 0.9445509292900703).abs() <= 1e-8);
    }

    #[test]
    fn quadrature_rejects_tables_past_the_cap() {
        let err = prob_a_beats_b_quadrature(&table(101, 101, 100, 100)).unwrap_err();
        assert_eq!(
            err,
            OracleError::TooLarge {
                total: 201,
                cap: QUADRATURE_TOTAL_CAP
            }
        );
        // Exactly at the cap still runs.
        assert!(prob_a_beats_b_quadrature(&table(60, 100, 50, 100)).is_ok());
    }

    #[test]
    fn rational_tiny_tables_are_exact() {
        let report = prob_a_beats_b_rational(&table(1, 1, 0, 1)).unwrap();
        assert_eq!(report.method, OracleMethod::Rational);
        assert_eq!(report.value, 5.0 / 6.0);
        assert_eq!(report.error_estimate, 0.0);

        let complement = prob_a_beats_b_rational(&table(0, 1, 1, 1)).unwrap();
        assert_eq!(complement.value, 1.0 / 6.0);
    }

    #[test]
    fn rational_matches_quadrature_on_a_small_table() {
        let t = table(2, 3, 1, 3);
        let rational = prob_a_beats_b_rational(&t).unwrap();
        let quadrature = prob_a_beats_b_quadrature(&t).unwrap();
        assert!((rational.value - quadrature.value).abs() <= 1e-10);
    }

    #[test]
    fn rational_rejects_tables_past_the_cap() {
        let err = prob_a_beats_b_rational(&table(0, 151, 0, 150)).unwrap_err();
        assert_eq!(
            err,
            OracleError::TooLarge {
                total: 301,
                cap: RATIONAL_TOTAL_CAP
            }
        );
    }

    fn for_every_tiny_table(mut check: impl FnMut(&TrialTable)) {
        for n_a in 1..=11u64 {
            for n_b in 1..=(12 - n_a) {
                for s_a in 0..=n_a {
                    for s_b in 0..=n_b {
                        check(&table(s_a, n_a, s_b, n_b));
                    }
                }
            }
        }
    }

    #[test]
    fn rational_equals_the_log_space_sum_on_every_tiny_table() {
        for_every_tiny_table(|t| {
            let rational = prob_a_beats_b_rational(t).unwrap().value;
            let fast = bayes::prob_a_beats_b_exact(t).unwrap();
            assert!(
                (rational - fast).abs() <= 1e-12,
                "{t:?}: rational {rational} vs log-space {fast}"
            );
        });
    }

    #[test]
    fn rational_matches_quadrature_on_every_tiny_table() {
        for_every_tiny_table(|t| {
            let rational = prob_a_beats_b_rational(t).unwrap().value;
            let quadrature = prob_a_beats_b_quadrature(t).unwrap().value;
            assert!(
                (rational - quadrature).abs() <= 1e-10,
                "{t:?}: rational {rational} vs quadrature {quadrature}"
            );
        });
    }

    #[test]
    fn quadrature_matches_exact_sum_on_random_tables() {
        let mut rng = XorShift(0x9e3779b97f4a7c15);
        for _ in 0..50 {
            let n_a = 1 + rng.below(20);
            let n_b = 1 + rng.below(20);
            let t = table(rng.below(n_a + 1), n_a, rng.below(n_b + 1), n_b);
            let quadrature = prob_a_beats_b_quadrature(&t).unwrap().value;
            let fast = bayes::prob_a_beats_b_exact(&t).unwrap();
            assert!(
                (quadrature - fast).abs() <= 1e-8,
                "{t:?}: quadrature {quadrature} vs log-space {fast}"
            );
        }
    }

    #[test]
    fn montecarlo_is_deterministic_per_seed() {
        let t = table(60, 100, 50, 100);
        let first = prob_a_beats_b_montecarlo(&t, MIN_MC_SAMPLES, 7);
        let second = prob_a_beats_b_montecarlo(&t, MIN_MC_SAMPLES, 7);
        assert_eq!(first, second);
        assert_eq!(first.seed, Some(7));
        assert_eq!(first.method, OracleMethod::MonteCarlo);
    }

    #[test]
    fn montecarlo_brackets_the_tiny_closed_form() {
        let report = prob_a_beats_b_montecarlo(&table(1, 1, 0, 1), 1_000_000, 42);
        assert!((report.value - 5.0 / 6.0).abs() <= 1.2e-3);
        assert!((report.value - 5.0 / 6.0).abs() <= report.error_estimate);
    }

    #[test]
    fn montecarlo_band_covers_the_exact_value_on_nearly_every_seed() {
        let t = table(60, 100, 50, 100);
        let exact = bayes::prob_a_beats_b_exact(&t).unwrap();
        let covered = (0..100u64)
            .filter(|&seed| {
                let report = prob_a_beats_b_montecarlo(&t, MIN_MC_SAMPLES, seed);
                (report.value - exact).abs() <= report.error_estimate
            })
            .count();
        assert!(covered >= 99, "3-SE band covered only {covered}/100 runs");
    }

    #[test]
    fn montecarlo_band_stays_open_on_a_lopsided_table() {
        // Every draw lands on A's side here; the smoothing half-count is
        // what keeps the band from collapsing to zero width.
        let t = table(900, 1000, 800, 1000);
        let exact = bayes::prob_a_beats_b_exact(&t).unwrap();
        let report = prob_a_beats_b_montecarlo(&t, 100_000, 3);
        assert!(report.error_estimate > 0.0);
        assert!((report.value - exact).abs() <= report.error_estimate);
    }

    #[test]
    #[should_panic(expected = "Monte Carlo samples")]
    fn montecarlo_rejects_sample_counts_below_the_floor() {
        prob_a_beats_b_montecarlo(&table(1, 2, 1, 2), MIN_MC_SAMPLES - 1, 0);
    }

    #[test]
    fn grid_value_is_zero_when_nothing_is_feasible() {
        let tie = maximize_reversal_grid(&table(50, 100, 50, 100), 11);
        assert_eq!(tie.value, 0.0);
        assert_eq!(tie.method, OracleMethod::Grid);

        let b_ahead = maximize_reversal_grid(&table(30, 100, 50, 100), 11);
        assert_eq!(b_ahead.value, 0.0);
    }

    #[test]
    #[should_panic(expected = "lattice")]
    fn grid_rejects_oversized_lattices() {
        maximize_reversal_grid(&table(60, 100, 50, 100), MAX_GRID_LATTICE + 1);
    }

    #[test]
    fn grid_finds_the_known_reversal_band() {
        let report = maximize_reversal_grid(&table(900, 1000, 800, 1000), 41);
        assert!(
            report.value >= 0.04691,
            "grid best {} fell below the known feasible confidence",
            report.value
        );
        let refined = decompose::maximize_reversal(&table(900, 1000, 800, 1000)).unwrap();
        assert!(
            refined.plan.c_prime >= 0.95 * report.value,
            "refined search {} lags the coarse sweep {}",
            refined.plan.c_prime,
            report.value
        );
        // The coarse sweep in turn lands within 5% of the refined optimum.
        assert!(report.value >= 0.95 * refined.plan.c_prime);
    }

    #[test]
    fn grid_agrees_with_the_refined_search_on_a_modest_table() {
        let t = table(60, 100, 50, 100);
        let report = maximize_reversal_grid(&t, 21);
        let again = maximize_reversal_grid(&t, 21);
        assert_eq!(report, again);
        let refined = decompose::maximize_reversal(&t).unwrap();
        assert!(
            refined.plan.c_prime >= 0.95 * report.value,
            "refined search {} lags the coarse sweep {}",
            refined.plan.c_prime,
            report.value
        );
        assert!(report.value >= 0.95 * refined.plan.c_prime);
    }
}
