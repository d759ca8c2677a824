//! Simulation config files.
//!
//! A config is a flat TOML table. List-valued keys:
//!
//! | key              | type            | default            |
//! |------------------|-----------------|--------------------|
//! | `distributions`  | list of strings | required           |
//! | `sample_sizes`   | list of ints    | required           |
//! | `cvs_pct`        | list of numbers | required           |
//! | `shifts_pct`     | list of numbers | `[0]`              |
//! | `tau_fracs_pct`  | list of numbers | `[50]`             |
//! | `alphas`         | list of numbers | `[0.01, 0.05, 0.10]` |
//!
//! Scalar keys `replications`, `bootstrap_resamples`, `seed` and
//! `parallelism` are optional and yield to command-line flags. Any other key
//! is an error.

use pettitt_core::{DistributionSpec, Family, Scenario, ShiftSpec};
use toml::Value;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Profile {
    #[default]
    Desk,
    Paper,
}

impl Profile {
    pub fn replications(self) -> u64 {
        match self {
            Profile::Desk => 2000,
            Profile::Paper => 10_000,
        }
    }

    pub fn resamples(self) -> usize {
        match self {
            Profile::Desk => 500,
            Profile::Paper => 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub distributions: Vec<Family>,
    pub sample_sizes: Vec<usize>,
    pub cvs_pct: Vec<f64>,
    pub shifts_pct: Vec<f64>,
    pub tau_fracs_pct: Vec<f64>,
    pub alphas: Vec<f64>,
    pub replications: Option<u64>,
    pub bootstrap_resamples: Option<usize>,
    pub seed: Option<u64>,
    pub parallelism: Option<usize>,
}

const KEYS: [&str; 10] = [
    "distributions",
    "sample_sizes",
    "cvs_pct",
    "shifts_pct",
    "tau_fracs_pct",
    "alphas",
    "replications",
    "bootstrap_resamples",
    "seed",
    "parallelism",
];

fn list<'a>(key: &str, v: &'a Value) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| CliError::config(key, "expected a list"))
}

fn number(key: &str, v: &Value) -> Result<f64> {
    match v {
        Value::Integer(i) => Ok(*i as f64),
        Value::Float(f) => Ok(*f),
        _ => Err(CliError::config(key, format!("expected a number, found {v}"))),
    }
}

fn positive_int(key: &str, v: &Value) -> Result<u64> {
    match v.as_integer() {
        Some(i) if i >= 1 => Ok(i as u64),
        _ => Err(CliError::config(key, format!("expected a positive integer, found {v}"))),
    }
}

fn numbers(key: &str, v: &Value, valid: impl Fn(f64) -> bool, what: &str) -> Result<Vec<f64>> {
    list(key, v)?
        .iter()
        .map(|x| {
            let n = number(key, x)?;
            if valid(n) {
                Ok(n)
            } else {
                Err(CliError::config(key, format!("{n} is not {what}")))
            }
        })
        .collect()
}

impl SimConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::config("<file>", e.message().to_string()))?;
        if let Some(bad) = table.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(CliError::config(bad.as_str(), "unknown key"));
        }
        let required = |key: &str| {
            table
                .get(key)
                .ok_or_else(|| CliError::config(key, "missing required key"))
        };

        let distributions = list("distributions", required("distributions")?)?
            .iter()
            .map(|v| {
                v.as_str()
                    .and_then(Family::parse)
                    .ok_or_else(|| CliError::config("distributions", format!("unknown distribution {v}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let sample_sizes = list("sample_sizes", required("sample_sizes")?)?
            .iter()
            .map(|v| match v.as_integer() {
                Some(n) if n >= 2 => Ok(n as usize),
                _ => Err(CliError::config("sample_sizes", format!("{v} is not an integer >= 2"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let cvs_pct = numbers(
            "cvs_pct",
            required("cvs_pct")?,
            |x| x > 0.0 && x.is_finite(),
            "a positive percentage",
        )?;
        let shifts_pct = match table.get("shifts_pct") {
            Some(v) => numbers("shifts_pct", v, f64::is_finite, "a finite percentage")?,
            None => vec![0.0],
        };
        let tau_fracs_pct = match table.get("tau_fracs_pct") {
            Some(v) => numbers(
                "tau_fracs_pct",
                v,
                |x| x > 0.0 && x < 100.0,
                "strictly between 0 and 100",
            )?,
            None => vec![50.0],
        };
        let alphas = match table.get("alphas") {
            Some(v) => numbers("alphas", v, |x| x > 0.0 && x < 1.0, "strictly between 0 and 1")?,
            None => vec![0.01, 0.05, 0.10],
        };
        if alphas.is_empty() {
            return Err(CliError::config(
                "alphas",
                "at least one significance level is required",
            ));
        }
        let replications = table
            .get("replications")
            .map(|v| positive_int("replications", v))
            .transpose()?;
        let bootstrap_resamples = table
            .get("bootstrap_resamples")
            .map(|v| positive_int("bootstrap_resamples", v).map(|n| n as usize))
            .transpose()?;
        let seed = table
            .get("seed")
            .map(|v| match v.as_integer() {
                Some(i) if i >= 0 => Ok(i as u64),
                _ => Err(CliError::config(
                    "seed",
                    format!("expected a nonnegative integer, found {v}"),
                )),
            })
            .transpose()?;
        let parallelism = table
            .get("parallelism")
            .map(|v| positive_int("parallelism", v).map(|n| n as usize))
            .transpose()?;

        let cfg = SimConfig {
            distributions,
            sample_sizes,
            cvs_pct,
            shifts_pct,
            tau_fracs_pct,
            alphas,
            replications,
            bootstrap_resamples,
            seed,
            parallelism,
        };
        if cfg.scenarios()?.is_empty() {
            let key = [
                ("distributions", cfg.distributions.is_empty()),
                ("sample_sizes", cfg.sample_sizes.is_empty()),
                ("cvs_pct", cfg.cvs_pct.is_empty()),
                ("shifts_pct", cfg.shifts_pct.is_empty()),
                ("tau_fracs_pct", cfg.tau_fracs_pct.is_empty()),
            ]
            .into_iter()
            .find(|(_, empty)| *empty)
            .map_or("shifts_pct", |(k, _)| k);
            return Err(CliError::config(key, "empty list leaves no scenarios to simulate"));
        }
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// Expand the factorial grid. A zero shift yields one no-change cell per
    /// (distribution, T, CV), independent of the change point fractions.
    pub fn scenarios(&self) -> Result<Vec<Scenario>> {
        let mut out = Vec::new();
        for &family in &self.distributions {
            for &len in &self.sample_sizes {
                for &cv in &self.cvs_pct {
                    let dist = DistributionSpec::new(family, DistributionSpec::DEFAULT_MEAN, cv / 100.0)
                        .map_err(|e| CliError::config("cvs_pct", e.to_string()))?;
                    for &s in &self.shifts_pct {
                        if s == 0.0 {
                            out.push(Scenario::new(dist, None, len)?);
                            continue;
                        }
                        for &tau in &self.tau_fracs_pct {
                            let shift = ShiftSpec::new(s / 100.0, tau / 100.0)
                                .map_err(|e| CliError::config("tau_fracs_pct", e.to_string()))?;
                            out.push(Scenario::new(dist, Some(shift), len)?);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE1: &str = r#"
distributions = ["gamma", "gumbel", "normal"]
sample_sizes = [10, 20, 30, 50, 100]
cvs_pct = [5, 10, 20, 30]
shifts_pct = [0]
alphas = [0.01, 0.05, 0.10]
replications = 2000
bootstrap_resamples = 500
seed = 7
"#;

    #[test]
    fn size_grid_expands() {
        let cfg = SimConfig::parse(TABLE1).unwrap();
        let s = cfg.scenarios().unwrap();
        assert_eq!(s.len(), 3 * 5 * 4);
        assert!(s.iter().all(|sc| sc.shift.is_none()));
        assert_eq!(cfg.replications, Some(2000));
        assert_eq!(cfg.seed, Some(7));
        assert_eq!(cfg.parallelism, None);
    }

    #[test]
    fn power_grid_expands_over_tau() {
        let cfg = SimConfig::parse(
            "distributions=['gamma']\nsample_sizes=[10,50]\ncvs_pct=[5]\nshifts_pct=[0,-5,5]\ntau_fracs_pct=[10,50,70]\n",
        )
        .unwrap();
        assert_eq!(cfg.scenarios().unwrap().len(), 2 * (1 + 2 * 3));
        assert_eq!(cfg.alphas, vec![0.01, 0.05, 0.10]);
    }

    fn key_of(text: &str) -> String {
        match SimConfig::parse(text).unwrap_err() {
            CliError::Config { key, .. } => key,
            other => panic!("expected config error, got {other}"),
        }
    }

    #[test]
    fn errors_name_the_key() {
        let base = "distributions=['gamma']\nsample_sizes=[10]\ncvs_pct=[5]\n";
        assert_eq!(key_of(&format!("{base}colour='red'\n")), "colour");
        assert_eq!(
            key_of("distributions=['weibull']\nsample_sizes=[10]\ncvs_pct=[5]\n"),
            "distributions"
        );
        assert_eq!(
            key_of("distributions=['gamma']\nsample_sizes=[1]\ncvs_pct=[5]\n"),
            "sample_sizes"
        );
        assert_eq!(key_of(&format!("{base}alphas=[0.05, 1.5]\n")), "alphas");
        assert_eq!(key_of(&format!("{base}replications=0\n")), "replications");
        assert_eq!(key_of(&format!("{base}tau_fracs_pct=[0]\n")), "tau_fracs_pct");
        assert_eq!(key_of("sample_sizes=[10]\ncvs_pct=[5]\n"), "distributions");
        assert_eq!(key_of(&format!("{base}cvs_pct=[5]\n")), "<file>");
    }

    #[test]
    fn empty_scenario_list_is_an_error() {
        assert_eq!(
            key_of("distributions=[]\nsample_sizes=[10]\ncvs_pct=[5]\n"),
            "distributions"
        );
        assert_eq!(
            key_of("distributions=['gamma']\nsample_sizes=[]\ncvs_pct=[5]\n"),
            "sample_sizes"
        );
        let e =
            SimConfig::parse("distributions=['gamma']\nsample_sizes=[10]\ncvs_pct=[5]\nshifts_pct=[]\n").unwrap_err();
        assert_eq!(e.exit_code(), CliError::EXIT_CONFIG);
    }
}
