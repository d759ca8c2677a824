//! Multi-threaded evaluation of a scenario grid.
//!
//! Work is split into blocks of replications. Every replication derives its
//! seeds from (base seed, scenario, replication index) alone, and block
//! counts are merged by addition, so the table does not depend on the number
//! of workers or on scheduling.

use pettitt_core::montecarlo::{count_rejections, rows_from_counts, RejectionCounts};
use pettitt_core::{BootstrapConfig, RejectionTable, Scenario};
use rayon::prelude::*;

use crate::error::{CliError, Result};

const BLOCK: u64 = 100;

pub fn run_grid(
    scenarios: &[Scenario],
    alphas: &[f64],
    replications: u64,
    config: BootstrapConfig,
    parallelism: usize,
) -> Result<RejectionTable> {
    if scenarios.is_empty() {
        return Err(CliError::config("scenarios", "empty scenario list"));
    }
    if replications == 0 {
        return Err(CliError::config("replications", "must be at least 1"));
    }
    let tasks: Vec<(usize, u64, u64)> = (0..scenarios.len())
        .flat_map(|s| {
            (0..replications)
                .step_by(BLOCK as usize)
                .map(move |start| (s, start, (start + BLOCK).min(replications)))
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| CliError::config("parallelism", e.to_string()))?;
    let partial: Vec<(usize, RejectionCounts)> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(s, start, end)| {
                count_rejections(&scenarios[s], alphas, start..end, config.seed, config.num_resamples).map(|c| (s, c))
            })
            .collect::<std::result::Result<_, _>>()
    })?;

    let mut totals: Vec<RejectionCounts> = vec![RejectionCounts::zeros(alphas.len()); scenarios.len()];
    for (s, counts) in &partial {
        totals[*s].merge(counts);
    }
    let rows = scenarios
        .iter()
        .zip(&totals)
        .flat_map(|(sc, counts)| rows_from_counts(sc, alphas, counts, config.num_resamples, config.seed))
        .collect();
    Ok(RejectionTable { rows })
}
