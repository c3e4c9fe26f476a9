//! Table ingestion from CSV or JSON text, sniffed by the first
//! non-whitespace character: `{` means JSON, anything else is CSV.
//!
//! The CSV grammar is deliberately narrow. UTF-8, comma-separated, no
//! quoting, and one of two exact headers:
//!
//! ```text
//! label,successes,trials          one table, row A then row B
//! part,label,successes,trials     two tables, part 1 then part 2
//! ```
//!
//! JSON input is an object `{"a": {"successes": n, "trials": n}, "b":
//! {...}}` or `{"parts": [two such objects]}`.

use serde::Deserialize;
use thiserror::Error;

use invsim::{ModelError, TrialTable};

/// What a source file held: one table or a two-part pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Single(TrialTable),
    Pair(TrialTable, TrialTable),
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{context}: {source}")]
    Semantic {
        context: String,
        source: ModelError,
    },
    #[error("{0}")]
    Shape(String),
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> InputError {
    InputError::Parse {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse(source: &str) -> Result<Input, InputError> {
    match source.chars().find(|c| !c.is_whitespace()) {
        Some('{') => parse_json(source),
        _ => parse_csv(source),
    }
}

const ONE_TABLE_HEADER: &str = "label,successes,trials";
const TWO_TABLE_HEADER: &str = "part,label,successes,trials";

/// A data row, with enough position kept around to blame it later.
struct Row<'a> {
    line: usize,
    part: Option<&'a str>,
    label: &'a str,
    label_column: usize,
    successes: u64,
    trials: u64,
}

fn parse_csv(source: &str) -> Result<Input, InputError> {
    let mut lines = source
        .lines()
        .enumerate()
        .map(|(i, raw)| (i + 1, raw.strip_suffix('\r').unwrap_or(raw)))
        .filter(|(_, text)| !text.trim().is_empty());

    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, 1, "empty input; expected a CSV header or a JSON object"))?;
    let with_part = match header {
        ONE_TABLE_HEADER => false,
        TWO_TABLE_HEADER => true,
        _ => {
            return Err(parse_err(
                1,
                1,
                format!("expected header `{ONE_TABLE_HEADER}` or `{TWO_TABLE_HEADER}`"),
            ))
        }
    };

    let expected_rows = if with_part { 4 } else { 2 };
    let mut rows = Vec::with_capacity(expected_rows);
    for (line, text) in lines {
        if rows.len() == expected_rows {
            return Err(parse_err(line, 1, "expected end of input"));
        }
        rows.push(parse_row(line, text, with_part)?);
    }
    if rows.len() < expected_rows {
        let after = rows.last().map_or(1, |row| row.line);
        return Err(parse_err(
            after + 1,
            1,
            format!("expected {expected_rows} data rows, found {}", rows.len()),
        ));
    }

    if with_part {
        for (row, want) in rows.iter().zip(["1", "1", "2", "2"]) {
            let got = row.part.expect("four-column rows carry a part field");
            if got != want {
                return Err(parse_err(
                    row.line,
                    1,
                    format!("expected part {want} here, found {got:?}; rows run part 1 then part 2, each A then B"),
                ));
            }
        }
        let first = build_table(&rows[0], &rows[1])?;
        let second = build_table(&rows[2], &rows[3])?;
        Ok(Input::Pair(first, second))
    } else {
        Ok(Input::Single(build_table(&rows[0], &rows[1])?))
    }
}

fn parse_row<'a>(line: usize, text: &'a str, with_part: bool) -> Result<Row<'a>, InputError> {
    let expected = if with_part { 4 } else { 3 };
    let mut fields = Vec::with_capacity(expected);
    let mut column = 1;
    for field in text.split(',') {
        fields.push((column, field));
        column += field.chars().count() + 1;
    }
    if fields.len() != expected {
        return Err(parse_err(
            line,
            1,
            format!("expected {expected} comma-separated fields, found {}", fields.len()),
        ));
    }

    let int = |(column, field): (usize, &str), name: &str| -> Result<u64, InputError> {
        field.parse().map_err(|_| {
            parse_err(
                line,
                column,
                format!("{name} must be an unsigned integer, found {field:?}"),
            )
        })
    };

    let mut next = fields.into_iter();
    let part = if with_part {
        Some(next.next().expect("field count checked").1)
    } else {
        None
    };
    let (label_column, label) = next.next().expect("field count checked");
    if label != "A" && label != "B" {
        return Err(parse_err(
            line,
            label_column,
            format!("label must be exactly \"A\" or \"B\", found {label:?}"),
        ));
    }
    let successes = int(next.next().expect("field count checked"), "successes")?;
    let trials = int(next.next().expect("field count checked"), "trials")?;
    Ok(Row {
        line,
        part,
        label,
        label_column,
        successes,
        trials,
    })
}

fn build_table(row_a: &Row<'_>, row_b: &Row<'_>) -> Result<TrialTable, InputError> {
    for (row, want) in [(row_a, "A"), (row_b, "B")] {
        if row.label != want {
            return Err(parse_err(
                row.line,
                row.label_column,
                format!("expected the {want} row here, found label {:?}", row.label),
            ));
        }
    }
    TrialTable::new(row_a.successes, row_a.trials, row_b.successes, row_b.trials).map_err(
        |source| {
            let row = match source {
                ModelError::CountExceedsTrials { arm: 'B', .. }
                | ModelError::EmptyArm { arm: 'B' }
                | ModelError::CountTooLarge { arm: 'B', .. } => row_b,
                _ => row_a,
            };
            InputError::Semantic {
                context: format!("row {}", row.line),
                source,
            }
        },
    )
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ArmSpec {
    successes: u64,
    trials: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableSpec {
    a: ArmSpec,
    b: ArmSpec,
}

/// One document shape covering both inputs, so malformed text still gets
/// real line/column positions instead of an untagged-enum shrug.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonDoc {
    a: Option<ArmSpec>,
    b: Option<ArmSpec>,
    parts: Option<Vec<TableSpec>>,
}

fn parse_json(source: &str) -> Result<Input, InputError> {
    let doc: JsonDoc = serde_json::from_str(source).map_err(|err| {
        let message = err.to_string();
        // serde_json appends " at line L column C"; the position is
        // reported separately, so strip the suffix.
        let message = message
            .rfind(" at line ")
            .map_or(message.as_str(), |i| &message[..i])
            .to_string();
        parse_err(err.line(), err.column().max(1), message)
    })?;

    let table = |spec: &TableSpec, context: &str| -> Result<TrialTable, InputError> {
        TrialTable::new(spec.a.successes, spec.a.trials, spec.b.successes, spec.b.trials).map_err(
            |source| InputError::Semantic {
                context: context.to_string(),
                source,
            },
        )
    };

    match (doc.a, doc.b, doc.parts) {
        (Some(a), Some(b), None) => table(&TableSpec { a, b }, "table").map(Input::Single),
        (None, None, Some(parts)) => match <[TableSpec; 2]>::try_from(parts) {
            Ok([first, second]) => Ok(Input::Pair(
                table(&first, "parts[0]")?,
                table(&second, "parts[1]")?,
            )),
            Err(parts) => Err(InputError::Shape(format!(
                "\"parts\" must hold exactly two tables, found {}",
                parts.len()
            ))),
        },
        _ => Err(InputError::Shape(
            "input JSON must supply either both \"a\" and \"b\" or a \"parts\" array".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(source: &str) -> TrialTable {
        match parse(source).unwrap() {
            Input::Single(table) => table,
            Input::Pair(..) => panic!("expected a single table"),
        }
    }

    #[test]
    fn parses_a_one_table_csv() {
        let table = single("label,successes,trials\nA,900,1000\nB,800,1000\n");
        assert_eq!(table, TrialTable::new(900, 1000, 800, 1000).unwrap());
    }

    #[test]
    fn parses_a_two_table_csv() {
        let source = "part,label,successes,trials\n1,A,60,80\n1,B,140,200\n2,A,60,200\n2,B,20,80\n";
        match parse(source).unwrap() {
            Input::Pair(first, second) => {
                assert_eq!(first, TrialTable::new(60, 80, 140, 200).unwrap());
                assert_eq!(second, TrialTable::new(60, 200, 20, 80).unwrap());
            }
            Input::Single(_) => panic!("expected a pair"),
        }
    }

    #[test]
    fn tolerates_crlf_and_trailing_blank_lines() {
        let table = single("label,successes,trials\r\nA,9,10\r\nB,8,10\r\n\r\n\n");
        assert_eq!(table, TrialTable::new(9, 10, 8, 10).unwrap());
    }

    #[test]
    fn rejects_a_bad_header_at_line_one() {
        let err = parse("label,wins,trials\nA,1,2\nB,1,2").unwrap_err();
        match err {
            InputError::Parse { line: 1, column: 1, message } => {
                assert!(message.contains("label,successes,trials"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn points_at_the_bad_integer() {
        let err = parse("label,successes,trials\nA,9,1o0\nB,8,10").unwrap_err();
        match err {
            InputError::Parse { line, column, message } => {
                assert_eq!((line, column), (2, 5));
                assert!(message.contains("trials"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn points_at_the_bad_label() {
        let err = parse("label,successes,trials\nA,9,10\nC,8,10").unwrap_err();
        match err {
            InputError::Parse { line, column, .. } => assert_eq!((line, column), (3, 1)),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_swapped_row_order() {
        let err = parse("label,successes,trials\nB,8,10\nA,9,10").unwrap_err();
        match err {
            InputError::Parse { line: 2, message, .. } => assert!(message.contains("expected the A row")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn surfaces_count_overflow_with_the_row_number() {
        let err = parse("label,successes,trials\nA,9,10\nB,5,3").unwrap_err();
        match err {
            InputError::Semantic { context, source } => {
                assert_eq!(context, "row 3");
                assert!(matches!(source, ModelError::CountExceedsTrials { arm: 'B', .. }));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_extra_rows() {
        let err = parse("label,successes,trials\nA,9,10\nB,8,10\nA,1,2").unwrap_err();
        match err {
            InputError::Parse { line: 4, message, .. } => assert!(message.contains("end of input")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_out_of_order_parts() {
        let source = "part,label,successes,trials\n2,A,60,200\n2,B,20,80\n1,A,60,80\n1,B,140,200";
        let err = parse(source).unwrap_err();
        match err {
            InputError::Parse { line: 2, message, .. } => assert!(message.contains("part 1")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parses_single_table_json() {
        let table = single(r#"{"a": {"successes": 900, "trials": 1000}, "b": {"successes": 800, "trials": 1000}}"#);
        assert_eq!(table, TrialTable::new(900, 1000, 800, 1000).unwrap());
    }

    #[test]
    fn parses_two_table_json() {
        let source = r#"{"parts": [
            {"a": {"successes": 60, "trials": 80}, "b": {"successes": 140, "trials": 200}},
            {"a": {"successes": 60, "trials": 200}, "b": {"successes": 20, "trials": 80}}
        ]}"#;
        assert!(matches!(parse(source).unwrap(), Input::Pair(..)));
    }

    #[test]
    fn json_errors_carry_positions() {
        let err = parse("{\"a\": {\"successes\": 1,\n \"trials\": oops}}").unwrap_err();
        match err {
            InputError::Parse { line: 2, column, .. } => assert!(column > 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn json_rejects_unknown_fields() {
        let err = parse(r#"{"a": {"successes": 1, "trials": 2, "wins": 3}, "b": {"successes": 1, "trials": 2}}"#)
            .unwrap_err();
        match err {
            InputError::Parse { message, .. } => assert!(message.contains("wins")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn json_rejects_mixed_shapes() {
        let err = parse(r#"{"a": {"successes": 1, "trials": 2}}"#).unwrap_err();
        assert!(matches!(err, InputError::Shape(_)));
    }

    #[test]
    fn json_semantic_errors_name_the_part() {
        let source = r#"{"parts": [
            {"a": {"successes": 1, "trials": 2}, "b": {"successes": 1, "trials": 2}},
            {"a": {"successes": 5, "trials": 3}, "b": {"successes": 1, "trials": 2}}
        ]}"#;
        match parse(source).unwrap_err() {
            InputError::Semantic { context, .. } => assert_eq!(context, "parts[1]"),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
