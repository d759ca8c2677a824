//! Rejection table CSV.
//!
//! Columns, in order:
//! `distribution,T,cv_pct,shift_pct,tau_pct,alpha,method,rate,mc_stderr,R,B,seed`.
//! Each (scenario, alpha) pair contributes a `classical` row followed by a
//! `bootstrap` row. No-change cells carry `shift_pct = 0` and `tau_pct = 0`.

use std::io::{Read, Write};

use pettitt_core::{Method, RejectionTable};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::fmt_num;

pub const COLUMNS: [&str; 12] = [
    "distribution",
    "T",
    "cv_pct",
    "shift_pct",
    "tau_pct",
    "alpha",
    "method",
    "rate",
    "mc_stderr",
    "R",
    "B",
    "seed",
];

/// One line of the table as read back from disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRecord {
    pub distribution: String,
    #[serde(rename = "T")]
    pub len: usize,
    pub cv_pct: f64,
    pub shift_pct: f64,
    pub tau_pct: f64,
    pub alpha: f64,
    pub method: String,
    pub rate: f64,
    pub mc_stderr: f64,
    #[serde(rename = "R")]
    pub replications: u64,
    #[serde(rename = "B")]
    pub resamples: usize,
    pub seed: u64,
}

pub fn write_table<W: Write>(table: &RejectionTable, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for row in &table.rows {
        let sc = &row.scenario;
        for method in [Method::Classical, Method::Bootstrap] {
            let (rate, se) = match method {
                Method::Classical => (row.rate_classical(), row.stderr_classical()),
                Method::Bootstrap => (row.rate_bootstrap(), row.stderr_bootstrap()),
            };
            w.write_record([
                sc.dist.family.as_str().to_string(),
                sc.len.to_string(),
                fmt_num(sc.dist.cv * 100.0, 6),
                fmt_num(sc.shift_magnitude() * 100.0, 6),
                fmt_num(sc.tau_fraction() * 100.0, 6),
                fmt_num(row.alpha, 6),
                method.as_str().to_string(),
                fmt_num(rate, 8),
                fmt_num(se, 8),
                row.replications.to_string(),
                row.resamples.to_string(),
                row.seed.to_string(),
            ])?;
        }
    }
    w.flush()
}

pub fn table_to_string(table: &RejectionTable) -> String {
    let mut buf = Vec::new();
    write_table(table, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is UTF-8")
}

pub fn read_table<R: Read>(input: R, source_name: &str) -> Result<Vec<TableRecord>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| CliError::input(source_name, Some(1), e.to_string()))?
        .clone();
    if headers.iter().ne(COLUMNS) {
        return Err(CliError::input(
            source_name,
            Some(1),
            format!("schema mismatch: expected columns {}", COLUMNS.join(",")),
        ));
    }
    let mut records = Vec::new();
    for rec in reader.deserialize::<TableRecord>() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line());
            CliError::input(source_name, line, e.to_string())
        })?;
        if rec.method != "classical" && rec.method != "bootstrap" {
            return Err(CliError::input(
                source_name,
                None,
                format!("unknown method `{}`", rec.method),
            ));
        }
        records.push(rec);
    }
    Ok(records)
}
