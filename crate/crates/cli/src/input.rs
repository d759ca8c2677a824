//! Series input from CSV.
//!
//! UTF-8 text with either one column (value) or two columns (label, value).
//! A single header line is allowed; it is recognized by a non-numeric value
//! field on the first line. Labels are carried through verbatim; one-column
//! files get 1-based positions as labels.

use std::path::Path;

use pettitt_core::TimeSeries;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSeries {
    pub labels: Vec<String>,
    pub series: TimeSeries,
}

impl LabeledSeries {
    /// Label of a 1-based index.
    pub fn label(&self, index: usize) -> &str {
        &self.labels[index - 1]
    }

    pub fn window(&self, from: usize, to: usize) -> Option<LabeledSeries> {
        let values = self.series.get(from..to)?.to_vec();
        Some(LabeledSeries {
            labels: self.labels[from..to].to_vec(),
            series: TimeSeries::new(values).ok()?,
        })
    }
}

pub fn read_series(path: &Path) -> Result<LabeledSeries> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::input(path.display().to_string(), None, "file is not valid UTF-8"))?;
    parse_series(&text, &path.display().to_string())
}

fn parse_value(field: &str) -> Option<f64> {
    field.trim().parse::<f64>().ok()
}

pub fn parse_series(text: &str, source_name: &str) -> Result<LabeledSeries> {
    let err = |line: u64, msg: String| CliError::input(source_name, Some(line), msg);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut labels = Vec::new();
    let mut values = Vec::new();
    let mut width = None;
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let n = record.len();
        if !(n == 1 || n == 2) {
            return Err(err(line, format!("expected 1 or 2 columns, found {n}")));
        }
        let value_field = &record[n - 1];
        if first {
            first = false;
            if parse_value(value_field).is_none() {
                continue;
            }
        }
        match width {
            None => width = Some(n),
            Some(w) if w != n => return Err(err(line, format!("expected {w} columns, found {n}"))),
            _ => {}
        }
        let v = parse_value(value_field).ok_or_else(|| err(line, format!("value `{value_field}` is not a number")))?;
        if !v.is_finite() {
            return Err(err(line, format!("value `{value_field}` is not finite")));
        }
        labels.push(if n == 2 {
            record[0].to_string()
        } else {
            (values.len() + 1).to_string()
        });
        values.push(v);
    }
    if values.is_empty() {
        return Err(CliError::input(source_name, None, "no observations"));
    }
    Ok(LabeledSeries {
        labels,
        series: TimeSeries::new(values)?,
    })
}
