//! Rendering of [`TrustReport`]s.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::aggregate::{ScoreScale, TrustReport};
use crate::analysis::ConvergenceTrace;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    /// Aligned text, models sorted by trust score.
    #[default]
    Table,
    /// Pretty-printed JSON with full metadata.
    Structured,
    /// `model,node,score` rows.
    TabularText,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Format::Table),
            "structured" | "json" => Ok(Format::Structured),
            "tabular-text" | "tabular" | "csv" => Ok(Format::TabularText),
            other => Err(Error::InvalidArgument(format!(
                "unknown format \"{other}\" (expected table, structured or tabular-text)"
            ))),
        }
    }
}

pub fn emit_report(report: &TrustReport, format: Format) -> Vec<u8> {
    match format {
        Format::Table => table(report).into_bytes(),
        Format::Structured => structured(report),
        Format::TabularText => tabular(report).into_bytes(),
    }
}

/// Inverse of the structured format.
pub fn parse_report(bytes: &[u8]) -> Result<TrustReport> {
    serde_json::from_slice(bytes).map_err(|e| Error::MalformedDocument {
        path: String::new(),
        message: e.to_string(),
    })
}

fn structured(report: &TrustReport) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(report).expect("reports always serialize");
    out.push(b'\n');
    out
}

fn cell(value: f64, scale: ScoreScale) -> String {
    match scale {
        ScoreScale::Unit => format!("{:.1}", value * 100.0),
        ScoreScale::Native => format!("{value:.1}"),
    }
}

fn table(report: &TrustReport) -> String {
    let scale = report.metadata.scale;
    let root = &report.metadata.root;
    let extra: Vec<(&String, &Vec<f64>)> = report
        .per_node_scores
        .iter()
        .filter(|(path, _)| *path != root)
        .collect();

    let mut header = vec!["model".to_string(), root.clone()];
    header.extend(
        extra
            .iter()
            .map(|(path, _)| path.strip_prefix(&format!("{root}/")).unwrap_or(path).to_string()),
    );
    let rows: Vec<Vec<String>> = report
        .ranking()
        .into_iter()
        .map(|i| {
            let mut row = vec![report.model_ids[i].clone(), cell(report.trust_scores[i], scale)];
            row.extend(extra.iter().map(|(_, s)| cell(s[i], scale)));
            row
        })
        .collect();

    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            rows.iter()
                .map(|r| r[c].chars().count())
                .chain([header[c].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in std::iter::once(&header).chain(&rows) {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (v, &w))| {
                if c == 0 {
                    format!("{v:<w$}")
                } else {
                    format!("{v:>w$}")
                }
            })
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}

fn tabular(report: &TrustReport) -> String {
    let mut out = String::from("model,node,score\n");
    for (path, scores) in &report.per_node_scores {
        for (model, score) in report.model_ids.iter().zip(scores) {
            let _ = writeln!(out, "{},{},{score}", csv_field(model), csv_field(path));
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Convergence trace as `checkpoint,model,cumulative_share` rows or JSON.
pub fn emit_trace(trace: &ConvergenceTrace, format: Format) -> Vec<u8> {
    match format {
        Format::Structured => {
            let mut out = serde_json::to_vec_pretty(trace).expect("traces always serialize");
            out.push(b'\n');
            out
        }
        Format::Table | Format::TabularText => trace.to_csv().into_bytes(),
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::aggregate::{ReportMetadata, StrategySpec};
    use crate::normalize::Normalization;

    fn report(per_node: BTreeMap<String, Vec<f64>>) -> TrustReport {
        TrustReport {
            model_ids: vec!["a".into(), "b,c".into(), "d".into()],
            trust_scores: vec![0.2, 0.5, 0.3],
            per_node_scores: per_node,
            metadata: ReportMetadata {
                dataset_id: "toy".into(),
                root: "t".into(),
                normalization: Normalization::Range,
                scale: ScoreScale::Unit,
                levels: vec![StrategySpec::Average],
                nodes: BTreeMap::new(),
                elapsed_ms: None,
            },
        }
    }

    #[test]
    fn table_is_sorted_descending() {
        let r = report(BTreeMap::from([("t".into(), vec![0.2, 0.5, 0.3])]));
        let text = String::from_utf8(emit_report(&r, Format::Table)).unwrap();
        let firsts: Vec<&str> = text.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
        assert_eq!(firsts, vec!["model", "b,c", "d", "a"]);
        assert!(text.contains("50.0"));
    }

    #[test]
    fn empty_per_node_map_is_header_only() {
        let r = report(BTreeMap::new());
        assert_eq!(emit_report(&r, Format::TabularText), b"model,node,score\n");
    }

    #[test]
    fn tabular_quotes_fields() {
        let r = report(BTreeMap::from([("t".into(), vec![0.2, 0.5, 0.3])]));
        let text = String::from_utf8(emit_report(&r, Format::TabularText)).unwrap();
        assert!(text.contains("\"b,c\",t,0.5\n"));
    }

    #[test]
    fn structured_round_trips_byte_identical() {
        let r = report(BTreeMap::from([("t".into(), vec![0.1 + 0.2, 1.0 / 3.0, 0.3])]));
        let bytes = emit_report(&r, Format::Structured);
        let back = parse_report(&bytes).unwrap();
        assert_eq!(emit_report(&back, Format::Structured), bytes);
    }

    #[test]
    fn formats_parse() {
        assert_eq!("tabular-text".parse::<Format>().unwrap(), Format::TabularText);
        assert!("xml".parse::<Format>().is_err());
    }
}
