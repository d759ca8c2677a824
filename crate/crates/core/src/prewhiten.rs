//! Step-preserving lag-1 prewhitening.
//!
//! The procedure tests the raw series, and if a change is found it removes
//! the estimated step, estimates and bias-corrects the lag-1 autocorrelation
//! of the step-free series, filters it, and adds the step back before testing
//! again:
//!
//! 1. test the original series `y`; stop if no change is detected;
//! 2. split at `tau`, `delta = mean(y[t > tau]) - mean(y[t <= tau])`,
//!    `x_t = y_t - delta * 1{t > tau}`;
//! 3. `rho*` from the lag-1 autocorrelation of `x`, `e_t = x_t - rho* x_{t-1}`
//!    for `t = 2..T`;
//! 4. `z = delta * 1{t > tau'} + e_t / (1 - rho*)` with `tau' = max(tau - 1, 1)`,
//!    then apply both tests to `z`.
//!
//! The filtered series is one observation shorter than the input; position
//! `k` of `z` corresponds to observation `k + 1` of `y`.

use alloc::vec::Vec;

use crate::bootstrap::{bootstrap_test, BootstrapConfig};
use crate::error::{Error, Result};
use crate::pettitt::{check_alpha, classical_test, TestResult};
use crate::series::{mean, TimeSeries};

/// Which test decides whether step 1 found a change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Gate {
    #[default]
    Classical,
    Bootstrap,
}

/// Lag-1 sample autocorrelation with the `1/(T-1)` numerator and `1/T`
/// denominator normalizations. The mixed scaling allows `|rho| > 1` on some
/// short adversarial inputs.
pub fn lag1_autocorr(series: &TimeSeries) -> Result<f64> {
    series.require_len(2)?;
    let n = series.len() as f64;
    let mu = series.mean();
    let denom = series.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / n;
    if denom == 0.0 {
        return Err(Error::Degenerate("constant series has no autocorrelation"));
    }
    let numer = series.windows(2).map(|w| (w[0] - mu) * (w[1] - mu)).sum::<f64>() / (n - 1.0);
    Ok(numer / denom)
}

/// `rho* = (rho + 1/T) * T / (T - 3)`.
pub fn bias_corrected_rho(rho_hat: f64, len: usize) -> Result<f64> {
    if len < 4 {
        return Err(Error::InvalidParameter {
            name: "series length for bias correction",
            value: len as f64,
        });
    }
    let n = len as f64;
    Ok((rho_hat + 1.0 / n) * (n / (n - 3.0)))
}

/// `x_t = y_t - delta * 1{t > tau}` with 1-based `tau`.
pub fn remove_step(series: &TimeSeries, tau: usize, delta: f64) -> Result<TimeSeries> {
    check_split(tau, series.len())?;
    let values = series
        .iter()
        .enumerate()
        .map(|(i, &y)| if i >= tau { y - delta } else { y })
        .collect();
    TimeSeries::new(values)
}

fn check_split(tau: usize, len: usize) -> Result<()> {
    if tau == 0 || tau >= len {
        Err(Error::IndexOutOfRange {
            index: tau,
            max: len.saturating_sub(1),
        })
    } else {
        Ok(())
    }
}

/// Quantities estimated once a change was detected at step 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Prewhitened {
    /// Change index used for the split, from the step-1 test.
    pub tau: usize,
    pub mean_before: f64,
    pub mean_after: f64,
    pub delta: f64,
    pub rho_hat: f64,
    pub rho_star: f64,
    /// Recombined series of length `T - 1`.
    pub series: TimeSeries,
    pub final_classical: TestResult,
    pub final_bootstrap: TestResult,
}

impl Prewhitened {
    /// Map a change index of the filtered series back to the original series.
    pub fn original_index(filtered_index: usize) -> usize {
        filtered_index + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrewhitenReport {
    pub initial_test: TestResult,
    /// `None` when step 1 found no change and the analysis stopped.
    pub prewhitened: Option<Prewhitened>,
}

impl PrewhitenReport {
    pub fn stopped_early(&self) -> bool {
        self.prewhitened.is_none()
    }
}

pub fn prewhiten_pipeline(series: &TimeSeries, alpha: f64, config: BootstrapConfig) -> Result<PrewhitenReport> {
    prewhiten_pipeline_gated(series, alpha, config, Gate::Classical)
}

pub fn prewhiten_pipeline_gated(
    series: &TimeSeries,
    alpha: f64,
    config: BootstrapConfig,
    gate: Gate,
) -> Result<PrewhitenReport> {
    check_alpha(alpha)?;
    series.require_len(4)?;

    let initial_test = match gate {
        Gate::Classical => classical_test(series, alpha)?,
        Gate::Bootstrap => bootstrap_test(series, alpha, config)?,
    };
    if !initial_test.rejected {
        return Ok(PrewhitenReport {
            initial_test,
            prewhitened: None,
        });
    }

    let tau = initial_test.change_index;
    let (before, after) = series.split_at(tau);
    let mean_before = mean(before);
    let mean_after = mean(after);
    let delta = mean_after - mean_before;
    let stepless = remove_step(series, tau, delta)?;

    let rho_hat = lag1_autocorr(&stepless)?;
    let rho_star = bias_corrected_rho(rho_hat, series.len())?;
    if rho_star.is_nan() || rho_star.abs() >= 1.0 {
        return Err(Error::NearUnitRoot { rho_star });
    }

    let tau_filtered = tau.saturating_sub(1).max(1);
    let scale = 1.0 / (1.0 - rho_star);
    let values: Vec<f64> = stepless
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let innovation = w[1] - rho_star * w[0];
            let step = if i + 1 > tau_filtered { delta } else { 0.0 };
            step + innovation * scale
        })
        .collect();
    let filtered = TimeSeries::new(values)?;

    let final_classical = classical_test(&filtered, alpha)?;
    let final_bootstrap = bootstrap_test(&filtered, alpha, config)?;
    Ok(PrewhitenReport {
        initial_test,
        prewhitened: Some(Prewhitened {
            tau,
            mean_before,
            mean_after,
            delta,
            rho_hat,
            rho_star,
            series: filtered,
            final_classical,
            final_bootstrap,
        }),
    })
}
