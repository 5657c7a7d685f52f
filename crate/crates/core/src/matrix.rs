//! Score matrices: models × criteria tables of bounded scores.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Optimization direction of a criterion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Maximize,
    Minimize,
}

/// Closed interval a criterion's scores are declared to live in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

impl Bounds {
    pub const PERCENT: Bounds = Bounds { lo: 0.0, hi: 100.0 };
    pub const UNIT: Bounds = Bounds { lo: 0.0, hi: 1.0 };

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::PERCENT
    }
}

/// Per-criterion declaration carried by the sidecar schema document.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriterionSchema {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
}

/// Sidecar schema: criterion → direction and bounds. Omitted entries default
/// to `Maximize` over `(0, 100)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSchema {
    #[serde(default)]
    pub criteria: BTreeMap<String, CriterionSchema>,
}

impl MatrixSchema {
    pub fn from_json(document: &str) -> Result<Self> {
        serde_json::from_str(document).map_err(|e| Error::MalformedDocument {
            path: format!("schema (line {}, column {})", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schema serializes")
    }
}

/// A validated models × criteria table.
///
/// Values are stored row-major. Every value lies inside its criterion's
/// bounds, and `hi > lo` for every criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreMatrix {
    model_ids: Vec<String>,
    criterion_ids: Vec<String>,
    values: Vec<f64>,
    bounds: Vec<Bounds>,
    directions: Vec<Direction>,
}

impl ScoreMatrix {
    pub fn new(
        model_ids: Vec<String>,
        criterion_ids: Vec<String>,
        rows: Vec<Vec<f64>>,
        bounds: Vec<Bounds>,
        directions: Vec<Direction>,
    ) -> Result<Self> {
        if model_ids.is_empty() || criterion_ids.is_empty() {
            return Err(Error::EmptyTable);
        }
        check_unique(&model_ids, Error::DuplicateModel)?;
        check_unique(&criterion_ids, Error::DuplicateCriterion)?;
        let n_criteria = criterion_ids.len();
        for len in [bounds.len(), directions.len()] {
            if len != n_criteria {
                return Err(Error::LengthMismatch {
                    expected: n_criteria,
                    actual: len,
                });
            }
        }
        if rows.len() != model_ids.len() {
            return Err(Error::LengthMismatch {
                expected: model_ids.len(),
                actual: rows.len(),
            });
        }
        for (c, b) in bounds.iter().enumerate() {
            if !(b.hi > b.lo) || !b.lo.is_finite() || !b.hi.is_finite() {
                return Err(Error::InvalidBounds {
                    criterion: criterion_ids[c].clone(),
                    lo: b.lo,
                    hi: b.hi,
                });
            }
        }
        let mut values = Vec::with_capacity(model_ids.len() * n_criteria);
        for (m, row) in rows.into_iter().enumerate() {
            if row.len() != n_criteria {
                return Err(Error::LengthMismatch {
                    expected: n_criteria,
                    actual: row.len(),
                });
            }
            for (c, v) in row.into_iter().enumerate() {
                if !bounds[c].contains(v) {
                    return Err(Error::OutOfBounds {
                        model: model_ids[m].clone(),
                        criterion: criterion_ids[c].clone(),
                        value: v,
                        lo: bounds[c].lo,
                        hi: bounds[c].hi,
                    });
                }
                values.push(v);
            }
        }
        Ok(ScoreMatrix {
            model_ids,
            criterion_ids,
            values,
            bounds,
            directions,
        })
    }

    /// Builds a matrix whose criteria are all maximized over `bounds`.
    pub fn uniform(
        model_ids: Vec<String>,
        criterion_ids: Vec<String>,
        rows: Vec<Vec<f64>>,
        bounds: Bounds,
    ) -> Result<Self> {
        let n = criterion_ids.len();
        Self::new(
            model_ids,
            criterion_ids,
            rows,
            vec![bounds; n],
            vec![Direction::Maximize; n],
        )
    }

    pub fn n_models(&self) -> usize {
        self.model_ids.len()
    }

    pub fn n_criteria(&self) -> usize {
        self.criterion_ids.len()
    }

    pub fn model_ids(&self) -> &[String] {
        &self.model_ids
    }

    pub fn criterion_ids(&self) -> &[String] {
        &self.criterion_ids
    }

    pub fn bounds(&self) -> &[Bounds] {
        &self.bounds
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn row(&self, model: usize) -> &[f64] {
        let c = self.n_criteria();
        &self.values[model * c..(model + 1) * c]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.n_criteria())
    }

    pub fn value(&self, model: usize, criterion: usize) -> f64 {
        self.values[model * self.n_criteria() + criterion]
    }

    pub fn column(&self, criterion: usize) -> Vec<f64> {
        self.rows().map(|r| r[criterion]).collect()
    }

    pub fn model_index(&self, id: &str) -> Option<usize> {
        self.model_ids.iter().position(|m| m == id)
    }

    pub fn criterion_index(&self, id: &str) -> Option<usize> {
        self.criterion_ids.iter().position(|c| c == id)
    }

    pub fn is_maximized(&self) -> bool {
        self.directions.iter().all(|d| *d == Direction::Maximize)
    }

    /// Errors with the first minimized criterion, if any.
    pub fn require_maximized(&self) -> Result<()> {
        match self.directions.iter().position(|d| *d == Direction::Minimize) {
            Some(c) => Err(Error::NotMaximized(self.criterion_ids[c].clone())),
            None => Ok(()),
        }
    }

    /// Keeps only the listed models, in the listed order.
    pub fn select_models(&self, indices: &[usize]) -> Result<Self> {
        let rows = indices
            .iter()
            .map(|&i| {
                if i >= self.n_models() {
                    Err(Error::IndexOutOfRange {
                        index: i,
                        len: self.n_models(),
                    })
                } else {
                    Ok(self.row(i).to_vec())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let ids = indices.iter().map(|&i| self.model_ids[i].clone()).collect();
        Self::new(
            ids,
            self.criterion_ids.clone(),
            rows,
            self.bounds.clone(),
            self.directions.clone(),
        )
    }

    /// Keeps only the listed criteria, in the listed order.
    pub fn select_criteria(&self, indices: &[usize]) -> Result<Self> {
        for &c in indices {
            if c >= self.n_criteria() {
                return Err(Error::IndexOutOfRange {
                    index: c,
                    len: self.n_criteria(),
                });
            }
        }
        let rows = self
            .rows()
            .map(|r| indices.iter().map(|&c| r[c]).collect())
            .collect();
        Self::new(
            self.model_ids.clone(),
            indices.iter().map(|&c| self.criterion_ids[c].clone()).collect(),
            rows,
            indices.iter().map(|&c| self.bounds[c]).collect(),
            indices.iter().map(|&c| self.directions[c]).collect(),
        )
    }

    /// The schema that reproduces this matrix's bounds and directions.
    pub fn schema(&self) -> MatrixSchema {
        let criteria = self
            .criterion_ids
            .iter()
            .zip(self.bounds.iter().zip(&self.directions))
            .map(|(id, (b, d))| {
                (
                    id.clone(),
                    CriterionSchema {
                        direction: Some(*d),
                        lo: Some(b.lo),
                        hi: Some(b.hi),
                    },
                )
            })
            .collect();
        MatrixSchema { criteria }
    }

    /// Comma-separated rendering with a `model,<criteria>...` header.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["model".to_string()];
        header.extend(self.criterion_ids.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for (id, row) in self.model_ids.iter().zip(self.rows()) {
            let mut rec = vec![id.clone()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

fn check_unique(ids: &[String], err: fn(String) -> Error) -> Result<()> {
    let mut seen = HashSet::with_capacity(ids.len());
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(err(id.clone()));
        }
    }
    Ok(())
}

/// Parses a `model,<c1>,<c2>,...` table and validates it against `schema`.
///
/// Criteria missing from the schema default to `Maximize` over `(0, 100)`.
pub fn load_matrix(document: &str, schema: Option<&MatrixSchema>) -> Result<ScoreMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .has_headers(true)
        .from_reader(document.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::MalformedTable(e.to_string()))?
        .clone();
    if header.is_empty() || header.iter().all(str::is_empty) {
        return Err(Error::EmptyTable);
    }
    if !header.get(0).is_some_and(|h| h.eq_ignore_ascii_case("model")) {
        return Err(Error::MalformedTable(
            "header must start with \"model\"".into(),
        ));
    }
    let criterion_ids: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    if criterion_ids.is_empty() {
        return Err(Error::EmptyTable);
    }

    let mut model_ids = Vec::new();
    let mut rows = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::MalformedTable(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != header.len() {
            return Err(Error::MalformedTable(format!(
                "row {} has {} cells, header has {}",
                r + 1,
                record.len(),
                header.len()
            )));
        }
        model_ids.push(record[0].to_string());
        let row = record
            .iter()
            .skip(1)
            .enumerate()
            .map(|(c, cell)| {
                cell.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::NonNumericCell {
                        row: r + 1,
                        column: criterion_ids[c].clone(),
                        value: cell.to_string(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if model_ids.is_empty() {
        return Err(Error::EmptyTable);
    }

    let empty = MatrixSchema::default();
    let schema = schema.unwrap_or(&empty);
    if let Some(unknown) = schema
        .criteria
        .keys()
        .find(|k| !criterion_ids.contains(k))
    {
        return Err(Error::MalformedDocument {
            path: format!("criteria.{unknown}"),
            message: "criterion not present in table header".into(),
        });
    }
    let mut bounds = Vec::with_capacity(criterion_ids.len());
    let mut directions = Vec::with_capacity(criterion_ids.len());
    for id in &criterion_ids {
        let entry = schema.criteria.get(id).cloned().unwrap_or_default();
        bounds.push(Bounds {
            lo: entry.lo.unwrap_or(Bounds::PERCENT.lo),
            hi: entry.hi.unwrap_or(Bounds::PERCENT.hi),
        });
        directions.push(entry.direction.unwrap_or_default());
    }
    ScoreMatrix::new(model_ids, criterion_ids, rows, bounds, directions)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_table_is_rejected() {
        assert_eq!(load_matrix("model,a,b\n", None), Err(Error::EmptyTable));
        assert_eq!(load_matrix("", None), Err(Error::EmptyTable));
    }

    #[test]
    fn duplicate_model_is_rejected() {
        let err = load_matrix("model,a\nx,1\nx,2\n", None).unwrap_err();
        assert_eq!(err, Error::DuplicateModel("x".into()));
    }

    #[test]
    fn non_numeric_cell_is_rejected() {
        let err = load_matrix("model,a,b\nx,1,abc\n", None).unwrap_err();
        assert!(matches!(err, Error::NonNumericCell { ref column, .. } if column == "b"));
    }

    #[test]
    fn missing_cell_is_an_error() {
        assert!(load_matrix("model,a,b\nx,1,\n", None).is_err());
        assert!(load_matrix("model,a,b\nx,1\n", None).is_err());
    }

    #[test]
    fn out_of_bounds_is_rejected() {
        let err = load_matrix("model,a\nx,101\n", None).unwrap_err();
        assert!(matches!(err, Error::OutOfBounds { value, .. } if value == 101.0));
    }

    #[test]
    fn schema_overrides_defaults() {
        let schema = MatrixSchema::from_json(
            r#"{"criteria": {"latency": {"direction": "minimize", "lo": 0, "hi": 500}}}"#,
        )
        .unwrap();
        let m = load_matrix("model,acc,latency\nx,90,250\n", Some(&schema)).unwrap();
        assert_eq!(m.directions(), &[Direction::Maximize, Direction::Minimize]);
        assert_eq!(m.bounds()[1], Bounds { lo: 0.0, hi: 500.0 });
        assert_eq!(m.bounds()[0], Bounds::PERCENT);
    }

    #[test]
    fn schema_for_unknown_criterion_is_rejected() {
        let schema = MatrixSchema::from_json(r#"{"criteria": {"speed": {}}}"#).unwrap();
        assert!(load_matrix("model,a\nx,1\n", Some(&schema)).is_err());
    }

    #[test]
    fn degenerate_bounds_rejected() {
        let err = ScoreMatrix::uniform(
            vec!["x".into()],
            vec!["a".into()],
            vec![vec![1.0]],
            Bounds { lo: 1.0, hi: 1.0 },
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidBounds { .. }));
    }

    #[test]
    fn csv_round_trip() {
        let doc = "model,a,b\nx,1.5,2\ny,0.1,99.99\n";
        let m = load_matrix(doc, None).unwrap();
        let again = load_matrix(&m.to_csv(), Some(&m.schema())).unwrap();
        assert_eq!(m, again);
    }
}
