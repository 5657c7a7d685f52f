//! Direction-aware rescaling of score matrices into `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Bounds, Direction, ScoreMatrix};

/// How a level's child scores are rescaled before aggregation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Use values as they are; every criterion must already be maximized.
    None,
    /// Rescale by each criterion's declared bounds.
    Bounds,
    /// Rescale by each criterion's observed minimum and maximum over the
    /// candidate set.
    #[default]
    Range,
}

impl Normalization {
    pub fn apply(self, matrix: &ScoreMatrix) -> Result<ScoreMatrix> {
        match self {
            Normalization::None => {
                matrix.require_maximized()?;
                Ok(matrix.clone())
            }
            Normalization::Bounds => Ok(normalize(matrix)),
            Normalization::Range => Ok(normalize_range(matrix)),
        }
    }
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Normalization::None),
            "bounds" => Ok(Normalization::Bounds),
            "range" => Ok(Normalization::Range),
            other => Err(Error::InvalidArgument(format!(
                "normalization \"{other}\" (expected none, bounds or range)"
            ))),
        }
    }
}

fn rescale(v: f64, lo: f64, hi: f64, direction: Direction) -> f64 {
    let x = ((v - lo) / (hi - lo)).clamp(0.0, 1.0);
    match direction {
        Direction::Maximize => x,
        Direction::Minimize => 1.0 - x,
    }
}

fn rebuild(matrix: &ScoreMatrix, rows: Vec<Vec<f64>>) -> ScoreMatrix {
    ScoreMatrix::uniform(
        matrix.model_ids().to_vec(),
        matrix.criterion_ids().to_vec(),
        rows,
        Bounds::UNIT,
    )
    .expect("rescaled values stay inside the unit interval")
}

/// Rescales every criterion by its declared bounds, `(v − lo) / (hi − lo)`,
/// flipping minimized criteria to `1 − v'`. The result is all-maximized
/// over `(0, 1)`.
pub fn normalize(matrix: &ScoreMatrix) -> ScoreMatrix {
    let rows = matrix
        .rows()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(c, &v)| {
                    let b = matrix.bounds()[c];
                    rescale(v, b.lo, b.hi, matrix.directions()[c])
                })
                .collect()
        })
        .collect();
    rebuild(matrix, rows)
}

/// Rescales every criterion by the range observed across the models, so the
/// best model on a criterion scores 1 and the worst scores 0. A constant
/// column carries no ranking information and falls back to its
/// bounds-normalized value.
pub fn normalize_range(matrix: &ScoreMatrix) -> ScoreMatrix {
    let ranges: Vec<(f64, f64)> = (0..matrix.n_criteria())
        .map(|c| {
            matrix
                .rows()
                .map(|r| r[c])
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(v), hi.max(v))
                })
        })
        .collect();
    let rows = matrix
        .rows()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(c, &v)| {
                    let (lo, hi) = ranges[c];
                    let d = matrix.directions()[c];
                    if hi > lo {
                        rescale(v, lo, hi, d)
                    } else {
                        let b = matrix.bounds()[c];
                        rescale(v, b.lo, b.hi, d)
                    }
                })
                .collect()
        })
        .collect();
    rebuild(matrix, rows)
}

/// Merges groups of criteria into single columns holding the mean of their
/// bounds-normalized members. Criteria not named in any group pass through
/// (bounds-normalized). Output columns keep first-appearance order.
pub fn group_columns(matrix: &ScoreMatrix, groups: &[(String, Vec<String>)]) -> Result<ScoreMatrix> {
    let unit = normalize(matrix);
    let mut grouped = vec![None; matrix.n_criteria()];
    for (g, (_, members)) in groups.iter().enumerate() {
        if members.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "column group \"{}\" is empty",
                groups[g].0
            )));
        }
        for m in members {
            let c = matrix
                .criterion_index(m)
                .ok_or_else(|| Error::DanglingCriterion(m.clone()))?;
            if grouped[c].replace(g).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "criterion \"{m}\" appears in more than one group"
                )));
            }
        }
    }

    enum Col {
        Single(usize),
        Group(usize),
    }
    let mut columns = Vec::new();
    let mut emitted = vec![false; groups.len()];
    for c in 0..matrix.n_criteria() {
        match grouped[c] {
            None => columns.push(Col::Single(c)),
            Some(g) if !emitted[g] => {
                emitted[g] = true;
                columns.push(Col::Group(g));
            }
            Some(_) => {}
        }
    }

    let ids = columns
        .iter()
        .map(|col| match col {
            Col::Single(c) => matrix.criterion_ids()[*c].clone(),
            Col::Group(g) => groups[*g].0.clone(),
        })
        .collect();
    let rows = unit
        .rows()
        .map(|row| {
            columns
                .iter()
                .map(|col| match col {
                    Col::Single(c) => row[*c],
                    Col::Group(g) => {
                        let members = &groups[*g].1;
                        members
                            .iter()
                            .map(|m| row[matrix.criterion_index(m).unwrap()])
                            .sum::<f64>()
                            / members.len() as f64
                    }
                })
                .collect()
        })
        .collect();
    ScoreMatrix::uniform(matrix.model_ids().to_vec(), ids, rows, Bounds::UNIT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::load_matrix;
    use crate::matrix::MatrixSchema;

    fn mixed() -> ScoreMatrix {
        let schema =
            MatrixSchema::from_json(r#"{"criteria": {"b": {"direction": "minimize"}}}"#).unwrap();
        load_matrix("model,a,b\nx,47,30\ny,10,90\nz,80,50\n", Some(&schema)).unwrap()
    }

    #[test]
    fn linear_rescale_and_flip() {
        let n = normalize(&mixed());
        assert!((n.value(0, 0) - 0.47).abs() < 1e-12);
        assert!((n.value(0, 1) - 0.70).abs() < 1e-12);
        assert!(n.is_maximized());
        assert!(n.bounds().iter().all(|b| *b == Bounds::UNIT));
    }

    #[test]
    fn normalize_is_idempotent() {
        let once = normalize(&mixed());
        assert_eq!(normalize(&once), once);
        let once = normalize_range(&mixed());
        assert_eq!(normalize_range(&once), once);
    }

    #[test]
    fn range_maps_extremes_to_unit_ends() {
        let n = normalize_range(&mixed());
        assert_eq!(n.column(0), vec![(47.0 - 10.0) / 70.0, 0.0, 1.0]);
        // minimized: smallest raw value becomes 1
        assert_eq!(n.column(1), vec![1.0, 0.0, 1.0 - 20.0 / 60.0]);
    }

    #[test]
    fn range_constant_column_falls_back_to_bounds() {
        let m = load_matrix("model,a,b\nx,100,1\ny,100,2\n", None).unwrap();
        let n = normalize_range(&m);
        assert_eq!(n.column(0), vec![1.0, 1.0]);
    }

    #[test]
    fn none_rejects_minimized_criteria() {
        assert!(matches!(
            Normalization::None.apply(&mixed()),
            Err(Error::NotMaximized(c)) if c == "b"
        ));
    }

    #[test]
    fn grouping_averages_members() {
        let m = load_matrix("model,a,r1,r2,b\nx,10,20,40,50\n", None).unwrap();
        let g = group_columns(&m, &[("r".into(), vec!["r1".into(), "r2".into()])]).unwrap();
        assert_eq!(g.criterion_ids(), &["a", "r", "b"]);
        assert!((g.value(0, 1) - 0.3).abs() < 1e-12);
        assert!(group_columns(&m, &[("r".into(), vec!["speed".into()])]).is_err());
    }
}
