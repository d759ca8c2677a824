//! The bootstrap Pettitt test.
//!
//! The observed sample is treated as a pseudo-population: `B` resamples of
//! size `T` are drawn with replacement, the statistic is recomputed on each,
//! and the p value is the share of resampled statistics at least as large
//! as the observed one, `(1 + #{K*_b >= K}) / (B + 1)`.
//!
//! Resampled statistics are computed from dense ranks of the original
//! values. A resample only contains original values, so its sign sums follow
//! from a histogram over those ranks in `O(T)`, with no sort per resample.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::pettitt::{approx_p_value, check_alpha, pettitt_statistic, scan_max, Method, TestResult};
use crate::rng::{self, StreamRng};
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BootstrapConfig {
    pub num_resamples: usize,
    pub seed: u64,
}

impl BootstrapConfig {
    pub const DEFAULT_RESAMPLES: usize = 1000;

    pub fn new(num_resamples: usize, seed: u64) -> Result<Self> {
        if num_resamples == 0 {
            return Err(Error::NoResamples);
        }
        Ok(Self { num_resamples, seed })
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            num_resamples: Self::DEFAULT_RESAMPLES,
            seed: 0,
        }
    }
}

/// Draws resamples of one series and evaluates their Pettitt statistic.
pub struct Resampler {
    ranks: Vec<u32>,
    counts: Vec<u32>,
    below: Vec<u32>,
    drawn: Vec<u32>,
}

impl Resampler {
    pub fn new(values: &[f64]) -> Self {
        let mut sorted: Vec<f64> = values.to_vec();
        sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        sorted.dedup_by(|a, b| a == b);
        let ranks = values
            .iter()
            .map(|v| {
                sorted
                    .binary_search_by(|probe| probe.partial_cmp(v).unwrap_or(core::cmp::Ordering::Equal))
                    .unwrap_or_else(|i| i) as u32
            })
            .collect();
        let distinct = sorted.len();
        Self {
            ranks,
            counts: vec![0; distinct],
            below: vec![0; distinct],
            drawn: vec![0; values.len()],
        }
    }

    /// Draw one resample (as positions into the original series) and return
    /// its statistic `K*`.
    pub fn resample_stat<R: Rng + ?Sized>(&mut self, rng: &mut R) -> u64 {
        let n = self.ranks.len();
        self.counts.fill(0);
        for slot in self.drawn.iter_mut() {
            let r = self.ranks[rng.random_range(0..n)];
            *slot = r;
            self.counts[r as usize] += 1;
        }
        self.stat_of_drawn()
    }

    fn stat_of_drawn(&mut self) -> u64 {
        let n = self.drawn.len() as i64;
        let mut acc = 0u32;
        for (b, &c) in self.below.iter_mut().zip(&self.counts) {
            *b = acc;
            acc += c;
        }
        let (below, counts) = (&self.below, &self.counts);
        // smaller - larger = below - (n - below - count)
        let sums = self.drawn.iter().map(|&r| {
            let r = r as usize;
            2 * i64::from(below[r]) + i64::from(counts[r]) - n
        });
        scan_max(sums, self.drawn.len()).k_stat
    }

    #[cfg(test)]
    fn last_drawn_ranks(&self) -> &[u32] {
        &self.drawn
    }
}

/// Bootstrap p value for an observed statistic, `(1 + hits) / (B + 1)`.
pub fn bootstrap_p_value<R: Rng + ?Sized>(
    resampler: &mut Resampler,
    observed: u64,
    num_resamples: usize,
    rng: &mut R,
) -> f64 {
    let hits = (0..num_resamples)
        .filter(|_| resampler.resample_stat(rng) >= observed)
        .count();
    (1 + hits) as f64 / (num_resamples + 1) as f64
}

/// Bootstrap Pettitt test. The change location is the classical statistic's
/// location on the original sample.
pub fn bootstrap_test(series: &TimeSeries, alpha: f64, config: BootstrapConfig) -> Result<TestResult> {
    check_alpha(alpha)?;
    if config.num_resamples == 0 {
        return Err(Error::NoResamples);
    }
    let stat = pettitt_statistic(series)?;
    let mut resampler = Resampler::new(series);
    let mut rng: StreamRng = rng::stream(config.seed);
    let p = bootstrap_p_value(&mut resampler, stat.k_stat, config.num_resamples, &mut rng);
    Ok(TestResult::new(stat, p, Method::Bootstrap, alpha))
}

/// Both tests on one series, sharing the statistic computation.
pub fn both_tests(series: &TimeSeries, alpha: f64, config: BootstrapConfig) -> Result<(TestResult, TestResult)> {
    check_alpha(alpha)?;
    if config.num_resamples == 0 {
        return Err(Error::NoResamples);
    }
    let stat = pettitt_statistic(series)?;
    let classical = TestResult::new(
        stat,
        approx_p_value(stat.k_stat, series.len()),
        Method::Classical,
        alpha,
    );
    let mut resampler = Resampler::new(series);
    let mut rng: StreamRng = rng::stream(config.seed);
    let p = bootstrap_p_value(&mut resampler, stat.k_stat, config.num_resamples, &mut rng);
    Ok((classical, TestResult::new(stat, p, Method::Bootstrap, alpha)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pettitt::classical_test;
    use proptest::prelude::*;

    fn ts(v: &[f64]) -> TimeSeries {
        TimeSeries::try_from(v).unwrap()
    }

    #[test]
    fn zero_resamples_rejected() {
        assert_eq!(BootstrapConfig::new(0, 1), Err(Error::NoResamples));
        let bad = BootstrapConfig {
            num_resamples: 0,
            seed: 1,
        };
        assert_eq!(bootstrap_test(&ts(&[1.0, 2.0]), 0.05, bad), Err(Error::NoResamples));
    }

    #[test]
    fn constant_series_has_unit_p() {
        for b in [1, 7, 250] {
            let r = bootstrap_test(&ts(&[4.0; 15]), 0.05, BootstrapConfig::new(b, 3).unwrap()).unwrap();
            assert_eq!(r.p_value, 1.0);
            assert!(!r.rejected);
            assert_eq!(r.k_stat, 0);
        }
    }

    #[test]
    fn perfect_separation_reaches_floor() {
        let mut v: Vec<f64> = (0..25).map(|i| i as f64 * 1e-3).collect();
        v.extend((0..25).map(|i| 100.0 + i as f64 * 1e-3));
        let r = bootstrap_test(&ts(&v), 0.05, BootstrapConfig::new(1000, 2024).unwrap()).unwrap();
        assert_eq!(r.k_stat, 625);
        assert_eq!(r.change_index, 25);
        assert_eq!(r.p_value, 1.0 / 1001.0);
        assert!(r.rejected);
    }

    #[test]
    fn location_comes_from_classical_statistic() {
        let v = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0, 5.0, 8.0];
        let c = classical_test(&ts(&v), 0.1).unwrap();
        let b = bootstrap_test(&ts(&v), 0.1, BootstrapConfig::new(99, 5).unwrap()).unwrap();
        assert_eq!((c.k_stat, c.change_index), (b.k_stat, b.change_index));
        assert_eq!(b.method, Method::Bootstrap);
    }

    #[test]
    fn both_tests_agrees_with_separate_calls() {
        let v = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0];
        let cfg = BootstrapConfig::new(300, 77).unwrap();
        let (c, b) = both_tests(&ts(&v), 0.05, cfg).unwrap();
        assert_eq!(c, classical_test(&ts(&v), 0.05).unwrap());
        assert_eq!(b, bootstrap_test(&ts(&v), 0.05, cfg).unwrap());
    }

    proptest! {
        #[test]
        fn resampled_stat_matches_direct_statistic(
            v in prop::collection::vec(prop_oneof![(-3i32..3).prop_map(f64::from), -10.0f64..10.0], 2..30),
            seed in any::<u64>(),
        ) {
            let mut res = Resampler::new(&v);
            let mut rng = rng::stream(seed);
            let mut sorted = v.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            sorted.dedup();
            for _ in 0..5 {
                let k = res.resample_stat(&mut rng);
                let materialized: Vec<f64> = res.last_drawn_ranks().iter().map(|&r| sorted[r as usize]).collect();
                prop_assert_eq!(k, pettitt_statistic(&ts(&materialized)).unwrap().k_stat);
            }
        }

        #[test]
        fn p_value_on_lattice(
            v in prop::collection::vec(-10.0f64..10.0, 2..25),
            b in 1usize..60,
            seed in any::<u64>(),
        ) {
            let r = bootstrap_test(&ts(&v), 0.05, BootstrapConfig::new(b, seed).unwrap()).unwrap();
            let m = r.p_value * (b + 1) as f64;
            prop_assert!((m - m.round()).abs() < 1e-9);
            prop_assert!(m.round() >= 1.0 && m.round() <= (b + 1) as f64);
            prop_assert_eq!(r.rejected, r.p_value < 0.05);
        }

        #[test]
        fn deterministic_given_seed(v in prop::collection::vec(-10.0f64..10.0, 2..25), seed in any::<u64>()) {
            let cfg = BootstrapConfig::new(40, seed).unwrap();
            prop_assert_eq!(bootstrap_test(&ts(&v), 0.1, cfg).unwrap(), bootstrap_test(&ts(&v), 0.1, cfg).unwrap());
        }
    }
}
