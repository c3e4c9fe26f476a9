//! Two-arm trial tables and the orderings derived from them.
//!
//! A [`TrialTable`] records successes and trials for arms A and B. Everything
//! else in this crate consumes either the integer table or its fractional
//! counterpart ([`FractionalTable`]), which appears when a table is split
//! into real-valued sub-trials.
//!
//! Which arm is ahead is decided on exact integer arithmetic: comparing
//! `s_a / n_a` with `s_b / n_b` is done as `s_a * n_b` versus `s_b * n_a`
//! in 128-bit integers, so the verdict never depends on rounding.

use serde::Serialize;
use thiserror::Error;

/// Largest admissible count. Counts above this lose integer precision once
/// they flow into `f64` rate arithmetic, so they are rejected up front.
pub const MAX_COUNT: u64 = (1 << 53) - 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("arm {arm}: successes ({successes}) exceed trials ({trials})")]
    CountExceedsTrials {
        arm: char,
        successes: u64,
        trials: u64,
    },
    #[error("arm {arm}: no trials")]
    EmptyArm { arm: char },
    #[error("arm {arm}: count {value} exceeds the representable limit {max}", max = MAX_COUNT)]
    CountTooLarge { arm: char, value: u64 },
    #[error("fractional cell {cell} is not finite or out of range")]
    BadFraction { cell: &'static str },
}

/// Which arm has the higher success rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AAhead,
    BAhead,
    Tie,
}

/// Success counts and trial counts for a two-arm comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialTable {
    successes_a: u64,
    trials_a: u64,
    successes_b: u64,
    trials_b: u64,
}

/// Success rates of both arms plus the trial split.
///
/// `gamma` is the fraction of all trials allocated to arm A,
/// `n_a / (n_a + n_b)`; it is always strictly inside (0, 1) because both
/// arms of a valid table have at least one trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePair {
    pub p_a: f64,
    pub p_b: f64,
    pub n_a: u64,
    pub n_b: u64,
    pub gamma: f64,
}

impl TrialTable {
    pub fn new(
        successes_a: u64,
        trials_a: u64,
        successes_b: u64,
        trials_b: u64,
    ) -> Result<Self, ModelError> {
        check_arm('A', successes_a, trials_a)?;
        check_arm('B', successes_b, trials_b)?;
        Ok(TrialTable {
            successes_a,
            trials_a,
            successes_b,
            trials_b,
        })
    }

    pub fn successes_a(&self) -> u64 {
        self.successes_a
    }

    pub fn trials_a(&self) -> u64 {
        self.trials_a
    }

    pub fn successes_b(&self) -> u64 {
        self.successes_b
    }

    pub fn trials_b(&self) -> u64 {
        self.trials_b
    }

    pub fn failures_a(&self) -> u64 {
        self.trials_a - self.successes_a
    }

    pub fn failures_b(&self) -> u64 {
        self.trials_b - self.successes_b
    }

    /// Total trials over both arms.
    pub fn total_trials(&self) -> u64 {
        self.trials_a + self.trials_b
    }

    pub fn rates(&self) -> RatePair {
        let n = (self.trials_a + self.trials_b) as f64;
        RatePair {
            p_a: self.successes_a as f64 / self.trials_a as f64,
            p_b: self.successes_b as f64 / self.trials_b as f64,
            n_a: self.trials_a,
            n_b: self.trials_b,
            gamma: self.trials_a as f64 / n,
        }
    }

    /// Component-wise sum of two tables.
    ///
    /// Fails only when a summed count would exceed [`MAX_COUNT`].
    pub fn merge(&self, other: &Self) -> Result<Self, ModelError> {
        TrialTable::new(
            self.successes_a + other.successes_a,
            self.trials_a + other.trials_a,
            self.successes_b + other.successes_b,
            self.trials_b + other.trials_b,
        )
    }

    /// Compares the arms' rates exactly.
    pub fn direction(&self) -> Direction {
        let lhs = self.successes_a as u128 * self.trials_b as u128;
        let rhs = self.successes_b as u128 * self.trials_a as u128;
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => Direction::AAhead,
            std::cmp::Ordering::Less => Direction::BAhead,
            std::cmp::Ordering::Equal => Direction::Tie,
        }
    }

    /// The same table with the arm labels exchanged.
    pub fn swap_arms(&self) -> Self {
        TrialTable {
            successes_a: self.successes_b,
            trials_a: self.trials_b,
            successes_b: self.successes_a,
            trials_b: self.trials_a,
        }
    }

    pub fn to_fractional(&self) -> FractionalTable {
        FractionalTable {
            successes_a: self.successes_a as f64,
            trials_a: self.trials_a as f64,
            successes_b: self.successes_b as f64,
            trials_b: self.trials_b as f64,
        }
    }
}

fn check_arm(arm: char, successes: u64, trials: u64) -> Result<(), ModelError> {
    if trials == 0 {
        return Err(ModelError::EmptyArm { arm });
    }
    if trials > MAX_COUNT {
        return Err(ModelError::CountTooLarge { arm, value: trials });
    }
    if successes > trials {
        return Err(ModelError::CountExceedsTrials {
            arm,
            successes,
            trials,
        });
    }
    Ok(())
}

/// A trial table with real-valued cells, as produced by splitting an integer
/// table into sub-trials. Cells satisfy `0 <= successes <= trials` and
/// `trials > 0` per arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FractionalTable {
    successes_a: f64,
    trials_a: f64,
    successes_b: f64,
    trials_b: f64,
}

impl FractionalTable {
    pub fn new(
        successes_a: f64,
        trials_a: f64,
        successes_b: f64,
        trials_b: f64,
    ) -> Result<Self, ModelError> {
        check_cell("successes_a", successes_a)?;
        check_cell("trials_a", trials_a)?;
        check_cell("successes_b", successes_b)?;
        check_cell("trials_b", trials_b)?;
        if trials_a <= 0.0 {
            return Err(ModelError::EmptyArm { arm: 'A' });
        }
        if trials_b <= 0.0 {
            return Err(ModelError::EmptyArm { arm: 'B' });
        }
        if successes_a > trials_a {
            return Err(ModelError::BadFraction {
                cell: "successes_a",
            });
        }
        if successes_b > trials_b {
            return Err(ModelError::BadFraction {
                cell: "successes_b",
            });
        }
        Ok(FractionalTable {
            successes_a,
            trials_a,
            successes_b,
            trials_b,
        })
    }

    pub fn successes_a(&self) -> f64 {
        self.successes_a
    }

    pub fn trials_a(&self) -> f64 {
        self.trials_a
    }

    pub fn successes_b(&self) -> f64 {
        self.successes_b
    }

    pub fn trials_b(&self) -> f64 {
        self.trials_b
    }

    pub fn p_a(&self) -> f64 {
        self.successes_a / self.trials_a
    }

    pub fn p_b(&self) -> f64 {
        self.successes_b / self.trials_b
    }

    pub fn total_trials(&self) -> f64 {
        self.trials_a + self.trials_b
    }
}

fn check_cell(cell: &'static str, value: f64) -> Result<(), ModelError> {
    if !value.is_finite() || value < 0.0 {
        return Err(ModelError::BadFraction { cell });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(sa: u64, na: u64, sb: u64, nb: u64) -> TrialTable {
        TrialTable::new(sa, na, sb, nb).unwrap()
    }

    #[test]
    fn rejects_successes_over_trials() {
        assert_eq!(
            TrialTable::new(5, 3, 0, 1),
            Err(ModelError::CountExceedsTrials {
                arm: 'A',
                successes: 5,
                trials: 3
            })
        );
    }

    #[test]
    fn rejects_empty_arm() {
        assert_eq!(
            TrialTable::new(0, 1, 0, 0),
            Err(ModelError::EmptyArm { arm: 'B' })
        );
    }

    #[test]
    fn rejects_counts_past_representable_limit() {
        assert!(TrialTable::new(0, MAX_COUNT + 1, 0, 1).is_err());
        assert!(TrialTable::new(0, MAX_COUNT, 0, 1).is_ok());
    }

    #[test]
    fn rates_and_gamma() {
        let r = table(900, 1000, 800, 1000).rates();
        assert_eq!(r.p_a, 0.9);
        assert_eq!(r.p_b, 0.8);
        assert_eq!(r.gamma, 0.5);
        assert_eq!(r.n_a, 1000);
    }

    #[test]
    fn merge_sums_componentwise() {
        let m = table(60, 80, 140, 200)
            .merge(&table(60, 200, 20, 80))
            .unwrap();
        assert_eq!(m, table(120, 280, 160, 280));
    }

    #[test]
    fn merge_rejects_overflow_past_limit() {
        let big = table(0, MAX_COUNT, 0, 1);
        assert!(big.merge(&big).is_err());
    }

    #[test]
    fn direction_is_exact_on_extreme_counts() {
        // Rates differ by far less than f64 resolution at this scale; the
        // integer comparison must still see it.
        let n = MAX_COUNT;
        let t = TrialTable::new(n - 1, n, n - 2, n).unwrap();
        assert_eq!(t.direction(), Direction::AAhead);
        assert_eq!(t.swap_arms().direction(), Direction::BAhead);
    }

    #[test]
    fn direction_tie_on_equal_rates() {
        assert_eq!(table(1, 2, 2, 4).direction(), Direction::Tie);
        assert_eq!(table(6, 30, 14, 70).direction(), Direction::Tie);
    }

    #[test]
    fn table_one_merge_reverses() {
        let t1 = table(60, 80, 140, 200);
        let t2 = table(60, 200, 20, 80);
        assert_eq!(t1.direction(), Direction::AAhead);
        assert_eq!(t2.direction(), Direction::AAhead);
        assert_eq!(t1.merge(&t2).unwrap().direction(), Direction::BAhead);
    }

    #[test]
    fn fractional_validation() {
        assert!(FractionalTable::new(6.0, 30.0, 14.0, 70.0).is_ok());
        assert!(FractionalTable::new(31.0, 30.0, 14.0, 70.0).is_err());
        assert!(FractionalTable::new(0.0, 0.0, 14.0, 70.0).is_err());
        assert!(FractionalTable::new(f64::NAN, 30.0, 14.0, 70.0).is_err());
        assert!(FractionalTable::new(-1.0, 30.0, 14.0, 70.0).is_err());
    }

    #[test]
    fn fractional_rates() {
        let f = FractionalTable::new(6.0, 30.0, 14.0, 70.0).unwrap();
        assert_eq!(f.p_a(), 0.2);
        assert_eq!(f.p_b(), 0.2);
        assert_eq!(f.total_trials(), 100.0);
    }
}
