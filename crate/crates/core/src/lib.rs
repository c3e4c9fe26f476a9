//! Statistical machinery for two-arm success/failure comparisons: how
//! significant is an observed rate difference, when does merging trials
//! reverse a verdict, and how can a single dataset be split into sub-trials
//! that neutralize or reverse its aggregate conclusion.
//!
//! The short version of each module:
//!
//! * [`model`]: trial tables, rates, exact direction comparison
//! * [`special`]: log-gamma, incomplete beta, normal CDF, log-space sums
//! * [`bayes`]: exact posterior probabilities under a uniform prior
//! * [`asymptotics`]: normal-approximation significance and confidence
//! * [`paradox`]: reversal detection on merged trials
//! * [`decompose`]: splits that neutralize or reverse an aggregate verdict
//! * [`oracle`]: slow independent recomputations for verification
//!
//! See the guide in `book/` for worked examples; its chapters double as
//! doc-tests via [`guide`].

pub mod asymptotics;
pub mod bayes;
pub mod decompose;
pub mod guide;
pub mod model;
pub mod oracle;
pub mod paradox;
pub mod special;

pub use asymptotics::{
    AsymptoticsError, ComparisonResult, Method, SubtrialConfidence,
};
pub use bayes::{BayesError, PosteriorMoments, EXACT_TOTAL_CAP};
pub use decompose::{
    DecomposeError, DecompositionPlan, IntegerizedParts, ReversalSolution,
};
pub use model::{Direction, FractionalTable, ModelError, RatePair, TrialTable, MAX_COUNT};
pub use oracle::{OracleError, OracleMethod, OracleReport};
pub use paradox::{ParadoxError, SimpsonReport};
pub use special::{LogProb, LogSumExp, SpecialError};
