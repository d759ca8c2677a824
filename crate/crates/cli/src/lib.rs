//! File formats, the parallel simulation runner and the analysis workflow
//! behind the `pettitt` command-line tool.

pub mod analysis;
pub mod config;
pub mod error;
pub mod grid;
pub mod input;
pub mod report;
pub mod table;

pub use error::CliError;

/// Seed used when none is given on the command line, in the environment or
/// in a config file.
pub const DEFAULT_SEED: u64 = 20_190_417;

/// Format a number with at most `decimals` decimals and no trailing zeros.
pub(crate) fn fmt_num(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}
