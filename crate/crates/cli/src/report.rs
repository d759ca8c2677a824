//! Reshaping simulation tables for presentation.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use ordered::Key;

use crate::error::{CliError, Result};
use crate::fmt_num;
use crate::table::TableRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportKind {
    /// Size panels: rows T, a P.T / P.T* column pair per CV, one panel per alpha.
    SizeTable,
    /// Long-format rows for plotting power curves.
    PowerCurves,
}

mod ordered {
    /// Total order on floats for grouping keys.
    #[derive(Debug, Clone, Copy)]
    pub struct Key(pub f64);

    impl PartialEq for Key {
        fn eq(&self, other: &Self) -> bool {
            self.cmp(other).is_eq()
        }
    }

    impl Eq for Key {}

    impl PartialOrd for Key {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }

    impl Ord for Key {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.0.total_cmp(&other.0)
        }
    }
}

pub fn render(records: &[TableRecord], kind: ReportKind, source_name: &str) -> Result<String> {
    match kind {
        ReportKind::SizeTable => size_table(records, source_name),
        ReportKind::PowerCurves => Ok(power_curves(records)),
    }
}

pub fn size_table(records: &[TableRecord], source_name: &str) -> Result<String> {
    let size: Vec<&TableRecord> = records.iter().filter(|r| r.shift_pct == 0.0).collect();
    if size.is_empty() {
        return Err(CliError::input(
            source_name,
            None,
            "table has no no-change (shift_pct = 0) rows",
        ));
    }
    let mut dists: Vec<&str> = Vec::new();
    for r in &size {
        if !dists.contains(&r.distribution.as_str()) {
            dists.push(&r.distribution);
        }
    }
    let lookup = |d: &str, t: usize, cv: f64, alpha: f64, method: &str| {
        size.iter()
            .find(|r| r.distribution == d && r.len == t && r.cv_pct == cv && r.alpha == alpha && r.method == method)
            .map(|r| r.rate)
    };

    let mut out = String::new();
    for d in dists {
        let of_dist = size.iter().filter(|r| r.distribution == d);
        let lens: BTreeSet<usize> = of_dist.clone().map(|r| r.len).collect();
        let cvs: BTreeSet<Key> = of_dist.clone().map(|r| Key(r.cv_pct)).collect();
        let alphas: BTreeSet<Key> = of_dist.map(|r| Key(r.alpha)).collect();

        let _ = writeln!(out, "distribution = {d}");
        out.push_str("CV");
        for cv in &cvs {
            let _ = write!(out, "\t{}%\t", fmt_num(cv.0, 4));
        }
        out.push('\n');
        for alpha in &alphas {
            let _ = writeln!(out, "alpha = {}", fmt_num(alpha.0, 6));
            for _ in &cvs {
                out.push_str("\tP.T\tP.T*");
            }
            out.push('\n');
            for &t in &lens {
                let _ = write!(out, "T={t}");
                for cv in &cvs {
                    for method in ["classical", "bootstrap"] {
                        match lookup(d, t, cv.0, alpha.0, method) {
                            Some(rate) => {
                                let _ = write!(out, "\t{rate:.4}");
                            }
                            None => out.push_str("\t-"),
                        }
                    }
                }
                out.push('\n');
            }
        }
        out.push('\n');
    }
    Ok(out)
}

pub const POWER_COLUMNS: [&str; 8] = ["distribution", "T", "S", "CV", "tau", "alpha", "method", "rate"];

/// Long format, one row per table row; `S`, `CV` and `tau` in percent.
pub fn power_curves(records: &[TableRecord]) -> String {
    let mut out = POWER_COLUMNS.join(",");
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.distribution,
            r.len,
            fmt_num(r.shift_pct, 6),
            fmt_num(r.cv_pct, 6),
            fmt_num(r.tau_pct, 6),
            fmt_num(r.alpha, 6),
            r.method,
            fmt_num(r.rate, 8)
        );
    }
    out
}
