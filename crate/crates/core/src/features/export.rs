use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{FeatureLayout, FeatureMatrix};
use crate::error::{Result, VrenError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureFormat {
    Csv,
    Jsonl,
}

impl FromStr for FeatureFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(FeatureFormat::Csv),
            "jsonl" => Ok(FeatureFormat::Jsonl),
            other => Err(format!("unknown feature format `{other}` (csv, jsonl)")),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonlHeader {
    columns: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonlRow {
    x: Vec<f64>,
    label: usize,
    group: String,
}

fn header(fm: &FeatureMatrix) -> Vec<String> {
    let mut cols = FeatureLayout::get().column_names(fm.window);
    cols.push("label".into());
    cols.push("group".into());
    cols
}

/// Write a feature matrix to any writer. Values use the shortest decimal
/// form that parses back to the same `f64`.
pub fn write_features<W: Write>(fm: &FeatureMatrix, format: FeatureFormat, out: W) -> std::io::Result<()> {
    match format {
        FeatureFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(header(fm))?;
            let mut record = Vec::with_capacity(fm.width + 2);
            for (i, row) in fm.rows().enumerate() {
                record.clear();
                record.extend(row.iter().map(|v| v.to_string()));
                record.push(fm.y[i].to_string());
                record.push(fm.groups[i].clone());
                w.write_record(&record)?;
            }
            w.flush()
        }
        FeatureFormat::Jsonl => {
            let mut w = BufWriter::new(out);
            serde_json::to_writer(&mut w, &JsonlHeader { columns: header(fm) })?;
            w.write_all(b"\n")?;
            for (i, row) in fm.rows().enumerate() {
                let line = JsonlRow {
                    x: row.to_vec(),
                    label: fm.y[i],
                    group: fm.groups[i].clone(),
                };
                serde_json::to_writer(&mut w, &line)?;
                w.write_all(b"\n")?;
            }
            w.flush()
        }
    }
}

pub fn export_features(fm: &FeatureMatrix, path: &Path, format: FeatureFormat) -> Result<()> {
    let file = File::create(path).map_err(|e| VrenError::io(path, e))?;
    write_features(fm, format, file).map_err(|e| VrenError::io(path, e))
}

fn window_from_header(columns: &[String]) -> Result<usize> {
    let layout = FeatureLayout::get();
    let n = columns.len().saturating_sub(2);
    if columns.len() < 2 || n == 0 || !n.is_multiple_of(layout.width) {
        return Err(VrenError::Schema(format!(
            "{} columns is not a whole number of {}-wide round blocks plus label and group",
            columns.len(),
            layout.width
        )));
    }
    let window = n / layout.width - 1;
    let mut expected = layout.column_names(window);
    expected.push("label".into());
    expected.push("group".into());
    if expected != columns {
        return Err(VrenError::Schema("feature header does not match the layout".into()));
    }
    Ok(window)
}

pub fn read_features(path: &Path, format: FeatureFormat) -> Result<FeatureMatrix> {
    let file = File::open(path).map_err(|e| VrenError::io(path, e))?;
    let schema = |msg: String| VrenError::Schema(format!("{}: {msg}", path.display()));
    match format {
        FeatureFormat::Csv => {
            let mut r = csv::Reader::from_reader(file);
            let columns: Vec<String> = r
                .headers()
                .map_err(|e| schema(e.to_string()))?
                .iter()
                .map(str::to_string)
                .collect();
            let mut fm = FeatureMatrix::empty(window_from_header(&columns)?);
            for record in r.records() {
                let record = record.map_err(|e| schema(e.to_string()))?;
                let n = record.len();
                let values = record
                    .iter()
                    .take(n - 2)
                    .map(|v| v.parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| schema(e.to_string()))?;
                let label = record[n - 2].parse().map_err(|e| schema(format!("label: {e}")))?;
                fm.push(values, label, &record[n - 1]);
            }
            Ok(fm)
        }
        FeatureFormat::Jsonl => {
            let mut lines = BufReader::new(file).lines();
            let first = lines
                .next()
                .ok_or_else(|| schema("empty file".into()))?
                .map_err(|e| VrenError::io(path, e))?;
            let head: JsonlHeader = serde_json::from_str(&first).map_err(|e| schema(e.to_string()))?;
            let mut fm = FeatureMatrix::empty(window_from_header(&head.columns)?);
            for line in lines {
                let line = line.map_err(|e| VrenError::io(path, e))?;
                let row: JsonlRow = serde_json::from_str(&line).map_err(|e| schema(e.to_string()))?;
                if row.x.len() != fm.width {
                    return Err(schema(format!("row has {} values, expected {}", row.x.len(), fm.width)));
                }
                fm.push(row.x, row.label, &row.group);
            }
            Ok(fm)
        }
    }
}
