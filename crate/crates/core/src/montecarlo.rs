//! Rejection-rate estimation for the classical and bootstrap tests.
//!
//! Replication `r` of a scenario draws its series from a seed derived from
//! the base seed, the scenario's canonical key and `r`, and the bootstrap of
//! that replication uses a second stream derived from the replication seed.
//! Any partition of the replications therefore yields the same counts, which
//! is what lets the grid runner split work across threads freely.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::bootstrap::{bootstrap_p_value, Resampler};
use crate::error::{Error, Result};
use crate::pettitt::{approx_p_value, check_alpha, pettitt_statistic};
use crate::rng;
use crate::synth::{generate_series_with, DistributionSpec, ShiftSpec};

const BOOTSTRAP_STREAM: u64 = 0xB007_57A9_0000_0001;

/// One cell of a simulation grid. `shift: None` is the no-change (size) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub dist: DistributionSpec,
    pub shift: Option<ShiftSpec>,
    pub len: usize,
    pub label: String,
}

impl Scenario {
    pub fn new(dist: DistributionSpec, shift: Option<ShiftSpec>, len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::TooShort { len, min: 2 });
        }
        let mut s = Self {
            dist,
            shift,
            len,
            label: String::new(),
        };
        s.label = s.canonical_key();
        Ok(s)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Stable text encoding of everything that affects the simulated data.
    /// The label is not part of it.
    pub fn canonical_key(&self) -> String {
        let (s, tau) = match self.shift {
            Some(sh) => (sh.magnitude, sh.tau_fraction),
            None => (0.0, 0.0),
        };
        format!(
            "{}|mean={}|cv={}|T={}|S={}|tau={}",
            self.dist.family, self.dist.mean, self.dist.cv, self.len, s, tau
        )
    }

    pub fn shift_magnitude(&self) -> f64 {
        self.shift.map_or(0.0, |s| s.magnitude)
    }

    pub fn tau_fraction(&self) -> f64 {
        self.shift.map_or(0.0, |s| s.tau_fraction)
    }
}

pub fn replication_seed(base_seed: u64, scenario: &Scenario, replication: u64) -> u64 {
    let key = rng::fnv1a(scenario.canonical_key().as_bytes());
    rng::combine(rng::combine(base_seed, key), replication)
}

/// p values of both tests for one replication.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationOutcome {
    pub p_classical: f64,
    pub p_bootstrap: f64,
}

pub fn run_replication(
    scenario: &Scenario,
    replication: u64,
    base_seed: u64,
    num_resamples: usize,
) -> Result<ReplicationOutcome> {
    if num_resamples == 0 {
        return Err(Error::NoResamples);
    }
    let seed = replication_seed(base_seed, scenario, replication);
    let mut data_rng = rng::stream(seed);
    let series = generate_series_with(&scenario.dist, scenario.shift.as_ref(), scenario.len, &mut data_rng)?;
    let stat = pettitt_statistic(&series)?;
    let mut boot_rng = rng::stream(rng::combine(seed, BOOTSTRAP_STREAM));
    let mut resampler = Resampler::new(&series);
    Ok(ReplicationOutcome {
        p_classical: approx_p_value(stat.k_stat, series.len()),
        p_bootstrap: bootstrap_p_value(&mut resampler, stat.k_stat, num_resamples, &mut boot_rng),
    })
}

/// Rejection counts per significance level. Merging is plain addition, so
/// partial counts can be combined in any order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectionCounts {
    pub classical: Vec<u64>,
    pub bootstrap: Vec<u64>,
    pub replications: u64,
}

impl RejectionCounts {
    pub fn zeros(levels: usize) -> Self {
        Self {
            classical: vec![0; levels],
            bootstrap: vec![0; levels],
            replications: 0,
        }
    }

    pub fn record(&mut self, alphas: &[f64], outcome: ReplicationOutcome) {
        for (i, &a) in alphas.iter().enumerate() {
            self.classical[i] += u64::from(outcome.p_classical < a);
            self.bootstrap[i] += u64::from(outcome.p_bootstrap < a);
        }
        self.replications += 1;
    }

    pub fn merge(&mut self, other: &RejectionCounts) {
        for (a, b) in self.classical.iter_mut().zip(&other.classical) {
            *a += b;
        }
        for (a, b) in self.bootstrap.iter_mut().zip(&other.bootstrap) {
            *a += b;
        }
        self.replications += other.replications;
    }
}

pub(crate) fn check_alphas(alphas: &[f64]) -> Result<()> {
    alphas.iter().try_for_each(|&a| check_alpha(a))
}

/// Count rejections over a contiguous block of replication indices.
pub fn count_rejections(
    scenario: &Scenario,
    alphas: &[f64],
    replications: Range<u64>,
    base_seed: u64,
    num_resamples: usize,
) -> Result<RejectionCounts> {
    check_alphas(alphas)?;
    let mut counts = RejectionCounts::zeros(alphas.len());
    for r in replications {
        counts.record(alphas, run_replication(scenario, r, base_seed, num_resamples)?);
    }
    Ok(counts)
}

/// One (scenario, alpha) line of a rejection table.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectionRow {
    pub scenario: Scenario,
    pub alpha: f64,
    pub rejections_classical: u64,
    pub rejections_bootstrap: u64,
    pub replications: u64,
    pub resamples: usize,
    pub seed: u64,
}

impl RejectionRow {
    pub fn rate_classical(&self) -> f64 {
        self.rejections_classical as f64 / self.replications as f64
    }

    pub fn rate_bootstrap(&self) -> f64 {
        self.rejections_bootstrap as f64 / self.replications as f64
    }

    pub fn stderr_classical(&self) -> f64 {
        mc_stderr(self.rate_classical(), self.replications)
    }

    pub fn stderr_bootstrap(&self) -> f64 {
        mc_stderr(self.rate_bootstrap(), self.replications)
    }
}

/// Binomial Monte Carlo standard error `sqrt(rate (1 - rate) / R)`.
pub fn mc_stderr(rate: f64, replications: u64) -> f64 {
    libm::sqrt(rate * (1.0 - rate) / replications as f64)
}

pub fn rows_from_counts(
    scenario: &Scenario,
    alphas: &[f64],
    counts: &RejectionCounts,
    num_resamples: usize,
    seed: u64,
) -> Vec<RejectionRow> {
    alphas
        .iter()
        .enumerate()
        .map(|(i, &alpha)| RejectionRow {
            scenario: scenario.clone(),
            alpha,
            rejections_classical: counts.classical[i],
            rejections_bootstrap: counts.bootstrap[i],
            replications: counts.replications,
            resamples: num_resamples,
            seed,
        })
        .collect()
}

/// Rejection rates of both tests for one scenario at every level in `alphas`.
/// Each replication yields one p value per test, compared to all levels.
pub fn rejection_rates(
    scenario: &Scenario,
    alphas: &[f64],
    replications: u64,
    config: crate::BootstrapConfig,
) -> Result<Vec<RejectionRow>> {
    if replications == 0 {
        return Err(Error::InvalidParameter {
            name: "replications",
            value: 0.0,
        });
    }
    let counts = count_rejections(scenario, alphas, 0..replications, config.seed, config.num_resamples)?;
    Ok(rows_from_counts(
        scenario,
        alphas,
        &counts,
        config.num_resamples,
        config.seed,
    ))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RejectionTable {
    pub rows: Vec<RejectionRow>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::Family;
    use crate::BootstrapConfig;

    fn gamma(len: usize, cv: f64, shift: Option<(f64, f64)>) -> Scenario {
        let dist = DistributionSpec::new(Family::Gamma, 100.0, cv).unwrap();
        Scenario::new(dist, shift.map(|(s, t)| ShiftSpec::new(s, t).unwrap()), len).unwrap()
    }

    #[test]
    fn classical_never_rejects_at_ten() {
        let cfg = BootstrapConfig::new(99, 1).unwrap();
        for family in Family::ALL {
            let dist = DistributionSpec::new(family, 100.0, 0.2).unwrap();
            let sc = Scenario::new(dist, None, 10).unwrap();
            for row in rejection_rates(&sc, &[0.01, 0.05], 400, cfg).unwrap() {
                assert_eq!(row.rejections_classical, 0);
            }
        }
    }

    #[test]
    fn rates_monotone_in_alpha() {
        let sc = gamma(20, 0.05, Some((0.03, 0.5)));
        let rows = rejection_rates(&sc, &[0.01, 0.05, 0.10, 0.2], 300, BootstrapConfig::new(99, 4).unwrap()).unwrap();
        for w in rows.windows(2) {
            assert!(w[0].rate_classical() <= w[1].rate_classical());
            assert!(w[0].rate_bootstrap() <= w[1].rate_bootstrap());
        }
        for r in &rows {
            assert_eq!(r.replications, 300);
            assert!(r.rejections_bootstrap <= 300);
        }
    }

    #[test]
    fn partitioned_counts_match() {
        let sc = gamma(15, 0.1, Some((0.05, 0.7)));
        let alphas = [0.05, 0.1];
        let whole = count_rejections(&sc, &alphas, 0..60, 3, 49).unwrap();
        let mut parts = count_rejections(&sc, &alphas, 40..60, 3, 49).unwrap();
        parts.merge(&count_rejections(&sc, &alphas, 0..40, 3, 49).unwrap());
        assert_eq!(whole, parts);
    }

    #[test]
    fn seeds_depend_on_scenario_and_replication() {
        let a = gamma(20, 0.05, None);
        let b = gamma(20, 0.10, None);
        assert_ne!(replication_seed(1, &a, 0), replication_seed(1, &b, 0));
        assert_ne!(replication_seed(1, &a, 0), replication_seed(1, &a, 1));
        assert_ne!(replication_seed(1, &a, 0), replication_seed(2, &a, 0));
        let relabeled = a.clone().with_label("something else");
        assert_eq!(replication_seed(1, &a, 5), replication_seed(1, &relabeled, 5));
    }

    #[test]
    fn argument_errors() {
        let sc = gamma(20, 0.05, None);
        let cfg = BootstrapConfig::new(10, 0).unwrap();
        assert!(rejection_rates(&sc, &[0.05], 0, cfg).is_err());
        assert_eq!(rejection_rates(&sc, &[1.5], 10, cfg), Err(Error::InvalidAlpha(1.5)));
        assert!(Scenario::new(sc.dist, None, 1).is_err());
    }

    #[test]
    fn stderr_formula() {
        assert_eq!(mc_stderr(0.0, 100), 0.0);
        assert!((mc_stderr(0.5, 100) - 0.05).abs() < 1e-15);
    }
}
