//! Detecting aggregation reversals between two trials, plus the
//! prototype family of tables that exhibits one on demand.
//!
//! Two trials can each favor arm A while their merge favors arm B. The
//! prototype: trial 1 puts arm A at rate `1 - a` on `N_1` subjects and arm
//! B at `1 - b` on `N_2`; trial 2 puts arm A at rate `b` on `N_2` subjects
//! and arm B at `a` on `N_1`. For `a <= b < 1/2` each trial favors A, yet
//! the merged table favors B exactly when
//!
//! ```text
//! N_1 < N_2 * (1 - 2b) / (1 - 2a)
//! ```
//!
//! strictly. Direction checks here are exact integer comparisons, so the
//! reversal verdict carries no rounding ambiguity.

use serde::Serialize;
use thiserror::Error;

use crate::asymptotics::{self, ComparisonResult};
use crate::bayes::{self, BayesError};
use crate::model::{Direction, ModelError, TrialTable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParadoxError {
    #[error("argument outside the operation's domain: {0}")]
    Domain(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Bayes(#[from] BayesError),
}

/// Outcome of merging two trials: who leads where, whether the merge
/// reverses the per-trial verdict, and a confidence for each comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimpsonReport {
    pub part_directions: (Direction, Direction),
    pub merged_direction: Direction,
    pub reversal: bool,
    pub part_confidences: (ComparisonResult, ComparisonResult),
    pub merged_confidence: ComparisonResult,
    pub merged: TrialTable,
}

/// A comparison that degrades gracefully: the normal route when both arm
/// rates are interior, otherwise the exact posterior sum with no z-scale.
fn confidence(table: &TrialTable) -> Result<ComparisonResult, BayesError> {
    match asymptotics::prob_a_beats_b_normal(table) {
        Ok(r) => Ok(r),
        Err(_) => Ok(ComparisonResult::from_exact_prob(
            bayes::prob_a_beats_b_exact_uncapped(table)?,
        )),
    }
}

/// Merge two trials and report whether the aggregate direction disagrees
/// with a shared per-trial direction. A reversal requires both parts to
/// lean the same non-tied way and the merge to lean strictly the other
/// way; ties are not a directional claim on either side.
pub fn simpson_check(t1: &TrialTable, t2: &TrialTable) -> Result<SimpsonReport, ParadoxError> {
    let merged = t1.merge(t2)?;
    let d1 = t1.direction();
    let d2 = t2.direction();
    let dm = merged.direction();
    let reversal = d1 == d2 && d1 != Direction::Tie && dm != Direction::Tie && dm != d1;
    Ok(SimpsonReport {
        part_directions: (d1, d2),
        merged_direction: dm,
        reversal,
        part_confidences: (confidence(t1)?, confidence(t2)?),
        merged_confidence: confidence(&merged)?,
        merged,
    })
}

/// Size ratio below which the prototype reverses: `(1 - 2b) / (1 - 2a)`.
/// Merging flips the verdict exactly when `N_1 / N_2` is strictly below
/// this value.
pub fn prototype_reversal_threshold(a: f64, b: f64) -> Result<f64, ParadoxError> {
    if !(a >= 0.0) || a > b || !(b < 0.5) {
        return Err(ParadoxError::Domain(
            "prototype rates must satisfy 0 <= a <= b < 1/2",
        ));
    }
    Ok((1.0 - 2.0 * b) / (1.0 - 2.0 * a))
}

fn integral(x: f64) -> Result<u64, ParadoxError> {
    let rounded = x.round();
    if (x - rounded).abs() > 1e-9 * (1.0 + x.abs()) {
        return Err(ParadoxError::Domain(
            "prototype cell counts must come out integral",
        ));
    }
    Ok(rounded as u64)
}

/// Build the two prototype trials for rates `a <= b < 1/2` and group sizes
/// `n1`, `n2`. All four products `a n1`, `b n2`, `(1-a) n1`, `(1-b) n2`
/// must land on integers.
pub fn prototype_tables(
    a: f64,
    b: f64,
    n1: u64,
    n2: u64,
) -> Result<(TrialTable, TrialTable), ParadoxError> {
    prototype_reversal_threshold(a, b)?;
    if n1 == 0 || n2 == 0 {
        return Err(ParadoxError::Domain("group sizes must be positive"));
    }
    let a_n1 = integral(a * n1 as f64)?;
    let b_n2 = integral(b * n2 as f64)?;
    let t1 = TrialTable::new(n1 - a_n1, n1, n2 - b_n2, n2)?;
    let t2 = TrialTable::new(b_n2, n2, a_n1, n1)?;
    Ok((t1, t2))
}
