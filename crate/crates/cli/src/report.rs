//! Report assembly and emission.
//!
//! Reports are JSON by default, shaped for scripts: a stable
//! `schema_version`, the parsed input echoed back verbatim, named result
//! sections, and a list of human-readable warnings. Every number in a
//! report is recomputable from `input_echo` by the library operation the
//! section is named after; nothing is carried that cannot be re-derived.
//!
//! Floating-point values are serialized with 17 significant digits, enough
//! to round-trip any `f64` bit-faithfully. `--format text` renders the
//! same tree as aligned `path  value` lines for reading by eye.

use std::io;

use serde::Serialize;
use serde_json::Value;

use invsim::{
    ComparisonResult, DecompositionPlan, FractionalTable, IntegerizedParts, OracleReport,
    PosteriorMoments, SimpsonReport, TrialTable,
};

/// Bumped whenever any report field changes shape or meaning.
pub const SCHEMA_VERSION: &str = "1.0.0";

pub const PRINTED_CEILING_NOTE: &str =
    "reference-only; see docs: this closed form does not bound the solver's feasible range";

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub schema_version: &'static str,
    pub input_echo: InputEcho,
    pub results: Results,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum InputEcho {
    Single { table: TrialTable },
    Pair { parts: (TrialTable, TrialTable) },
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Results {
    Compare(CompareResults),
    MergeCheck(MergeCheckResults),
    Neutralize(NeutralizeResults),
    Reverse(ReverseResults),
}

#[derive(Debug, Serialize)]
pub struct CompareResults {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ComparisonResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal: Option<ComparisonResult>,
    pub posterior_moments: PosteriorMoments,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
}

#[derive(Debug, Serialize)]
pub struct OracleSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rational: Option<OracleReport>,
    pub monte_carlo: OracleReport,
}

#[derive(Debug, Serialize)]
pub struct MergeCheckResults {
    pub merge_check: SimpsonReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
}

#[derive(Debug, Serialize)]
pub struct NeutralizePlan {
    pub lambda: f64,
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Serialize)]
pub struct NeutralizeResults {
    pub plan: NeutralizePlan,
    pub parts: (FractionalTable, FractionalTable),
    pub integerized: IntegerizedParts,
}

/// One part's realized confidence, with the z-score it maps to on the
/// whole-table scale.
#[derive(Debug, Serialize)]
pub struct RealizedConfidence {
    pub part_index: u8,
    pub c_prime: f64,
    pub sigma: f64,
    pub z: f64,
}

#[derive(Debug, Serialize)]
pub struct PrintedCeiling {
    pub value: f64,
    pub note: &'static str,
}

#[derive(Debug, Serialize)]
pub struct CeilingSection {
    pub exact: f64,
    pub sufficient: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed: Option<PrintedCeiling>,
}

#[derive(Debug, Serialize)]
pub struct GridOracleSection {
    pub grid: OracleReport,
}

#[derive(Debug, Serialize)]
pub struct ReverseResults {
    pub verified: bool,
    pub plan: DecompositionPlan,
    pub parts: (FractionalTable, FractionalTable),
    pub realized_confidences: (RealizedConfidence, RealizedConfidence),
    pub ceilings: CeilingSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integerized: Option<IntegerizedParts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<GridOracleSection>,
}

/// Writes floats as `d.dddddddddddddddde[-]d`: 17 significant digits,
/// the smallest count that round-trips every finite `f64`.
struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

pub fn render_json(report: &AnalysisReport) -> String {
    let mut out = Vec::new();
    let mut serializer = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits);
    report
        .serialize(&mut serializer)
        .expect("reports hold only finite numbers and valid strings");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

pub fn render_text(report: &AnalysisReport) -> String {
    let value = serde_json::to_value(report).expect("reports serialize");
    let mut rows = Vec::new();
    flatten("", &value, &mut rows);
    let width = rows.iter().map(|(path, _)| path.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (path, rendered) in rows {
        out.push_str(&format!("{path:<width$}  {rendered}\n"));
    }
    out
}

fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => {
            for (key, child) in map {
                flatten(&join(key), child, rows);
            }
        }
        Value::Array(items) if items.iter().any(Value::is_object) => {
            for (index, child) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{index}]"), child, rows);
            }
        }
        Value::Array(items) => {
            if !items.is_empty() {
                let joined = items.iter().map(scalar).collect::<Vec<_>>().join(", ");
                rows.push((prefix.to_string(), joined));
            }
        }
        _ => rows.push((prefix.to_string(), scalar(value))),
    }
}

fn scalar(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        other => other.to_string(),
    }
}
