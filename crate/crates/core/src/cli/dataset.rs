//! Validation-dataset ingestion from CSV.
//!
//! Expected header: `series_id`, `replicate`, `level`, and exactly one
//! value representation: either `rel_error_pct` (percent deviation from
//! target, used as-is) or the pair `nominal`, `measured` (converted to
//! percent deviation). Comma delimited, `.` decimal separator, UTF-8, no
//! empty cells, no extra columns.

use crate::{Error, Result};
use std::collections::HashSet;
use std::path::Path;

/// All measurements for one concentration level, grouped by series in
/// order of first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub label: String,
    pub series_ids: Vec<String>,
    /// `groups[i]` holds the replicate values of `series_ids[i]`.
    pub groups: Vec<Vec<f64>>,
}

/// A parsed dataset: one or more levels in order of first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub levels: Vec<Level>,
}

#[derive(Clone, Copy)]
enum ValueColumns {
    RelError { rel: usize },
    NominalMeasured { nominal: usize, measured: usize },
}

struct Schema {
    series: usize,
    replicate: usize,
    level: usize,
    values: ValueColumns,
}

fn resolve_schema(headers: &csv::StringRecord) -> Result<Schema> {
    let mut series = None;
    let mut replicate = None;
    let mut level = None;
    let mut rel = None;
    let mut nominal = None;
    let mut measured = None;
    for (i, name) in headers.iter().enumerate() {
        let slot = match name {
            "series_id" => &mut series,
            "replicate" => &mut replicate,
            "level" => &mut level,
            "rel_error_pct" => &mut rel,
            "nominal" => &mut nominal,
            "measured" => &mut measured,
            other => {
                return Err(Error::Dataset(format!(
                    "unexpected column '{other}'; expected series_id, replicate, level, and \
                     rel_error_pct or nominal+measured"
                )));
            }
        };
        if slot.replace(i).is_some() {
            return Err(Error::Dataset(format!("duplicate column '{name}'")));
        }
    }
    let series =
        series.ok_or_else(|| Error::Dataset("missing required column 'series_id'".into()))?;
    let replicate =
        replicate.ok_or_else(|| Error::Dataset("missing required column 'replicate'".into()))?;
    let level = level.ok_or_else(|| Error::Dataset("missing required column 'level'".into()))?;

    let values = match (rel, nominal, measured) {
        (Some(rel), None, None) => ValueColumns::RelError { rel },
        (None, Some(nominal), Some(measured)) => {
            ValueColumns::NominalMeasured { nominal, measured }
        }
        (Some(_), _, _) => {
            return Err(Error::Dataset(
                "columns rel_error_pct and nominal/measured are mutually exclusive; \
                 provide exactly one representation"
                    .into(),
            ));
        }
        (None, Some(_), None) => {
            return Err(Error::Dataset(
                "column 'nominal' requires a 'measured' column".into(),
            ));
        }
        (None, None, Some(_)) => {
            return Err(Error::Dataset(
                "column 'measured' requires a 'nominal' column".into(),
            ));
        }
        (None, None, None) => {
            return Err(Error::Dataset(
                "missing value columns: provide rel_error_pct, or nominal and measured".into(),
            ));
        }
    };
    Ok(Schema {
        series,
        replicate,
        level,
        values,
    })
}

fn cell<'r>(record: &'r csv::StringRecord, idx: usize, name: &str, row: usize) -> Result<&'r str> {
    let raw = record
        .get(idx)
        .ok_or_else(|| Error::Dataset(format!("row {row}: missing cell in column '{name}'")))?;
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Err(Error::Dataset(format!(
            "row {row}: empty cell in column '{name}'"
        )));
    }
    Ok(trimmed)
}

fn numeric_cell(record: &csv::StringRecord, idx: usize, name: &str, row: usize) -> Result<f64> {
    let raw = cell(record, idx, name, row)?;
    let value: f64 = raw.parse().map_err(|_| {
        Error::Dataset(format!(
            "row {row}: column '{name}' holds '{raw}', not a decimal number \
             (use '.' as the decimal separator)"
        ))
    })?;
    if !value.is_finite() {
        return Err(Error::Dataset(format!(
            "row {row}: column '{name}' must be finite, got {value}"
        )));
    }
    Ok(value)
}

/// Reads and validates a dataset file.
pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Dataset(format!("cannot read '{}': {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Dataset(format!("cannot parse header: {e}")))?
        .clone();
    let schema = resolve_schema(&headers)?;

    let mut levels: Vec<Level> = Vec::new();
    let mut seen: HashSet<(String, String, String)> = HashSet::new();
    let mut rows = 0usize;
    for (i, record) in reader.records().enumerate() {
        let row = i + 2; // 1-based, after the header line
        let record = record.map_err(|e| Error::Dataset(format!("row {row}: {e}")))?;
        if record.len() != headers.len() {
            return Err(Error::Dataset(format!(
                "row {row}: expected {} cells, found {}",
                headers.len(),
                record.len()
            )));
        }
        let series_id = cell(&record, schema.series, "series_id", row)?.to_string();
        let replicate = cell(&record, schema.replicate, "replicate", row)?.to_string();
        let level_label = cell(&record, schema.level, "level", row)?.to_string();
        let value = match schema.values {
            ValueColumns::RelError { rel } => numeric_cell(&record, rel, "rel_error_pct", row)?,
            ValueColumns::NominalMeasured { nominal, measured } => {
                let nominal = numeric_cell(&record, nominal, "nominal", row)?;
                let measured = numeric_cell(&record, measured, "measured", row)?;
                if nominal == 0.0 {
                    return Err(Error::Dataset(format!(
                        "row {row}: nominal must be nonzero to express a relative error"
                    )));
                }
                100.0 * (measured - nominal) / nominal
            }
        };

        let key = (level_label.clone(), series_id.clone(), replicate.clone());
        if !seen.insert(key) {
            return Err(Error::Dataset(format!(
                "row {row}: duplicate measurement for level '{level_label}', \
                 series '{series_id}', replicate '{replicate}'"
            )));
        }

        let level = match levels.iter_mut().find(|l| l.label == level_label) {
            Some(l) => l,
            None => {
                levels.push(Level {
                    label: level_label.clone(),
                    series_ids: Vec::new(),
                    groups: Vec::new(),
                });
                levels.last_mut().expect("just pushed")
            }
        };
        match level.series_ids.iter().position(|s| *s == series_id) {
            Some(idx) => level.groups[idx].push(value),
            None => {
                level.series_ids.push(series_id);
                level.groups.push(vec![value]);
            }
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::Dataset("dataset holds no measurement rows".into()));
    }
    Ok(Dataset { levels })
}
