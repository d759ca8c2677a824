//! Pettitt change-point tests for hydroclimatological series.
//!
//! The crate provides the rank-based Pettitt statistic with its classical
//! asymptotic p value, a bootstrap version of the test that recalibrates the
//! null distribution by resampling the observed series, a step-preserving
//! lag-1 prewhitening procedure for autocorrelated data, synthetic series
//! generators (gamma, Gumbel, normal) and the per-replication primitives of a
//! size/power simulation study.
//!
//! Everything here is `no_std` + `alloc`. File formats, the command-line
//! driver and the multi-threaded grid runner live in `pettitt-cli`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bootstrap;
mod error;
pub mod montecarlo;
pub mod pettitt;
pub mod prewhiten;
pub mod rng;
mod series;
pub mod synth;

pub use bootstrap::{bootstrap_test, both_tests, BootstrapConfig};
pub use error::{Error, Result};
pub use montecarlo::{rejection_rates, RejectionCounts, RejectionRow, RejectionTable, Scenario};
pub use pettitt::{
    approx_p_value, classical_test, pettitt_statistic, pettitt_u, sgn, Method, PettittStatistic, TestResult,
};
pub use prewhiten::{
    bias_corrected_rho, lag1_autocorr, prewhiten_pipeline, prewhiten_pipeline_gated, remove_step, Gate,
    PrewhitenReport, Prewhitened,
};
pub use series::TimeSeries;
pub use synth::{generate_series, DistributionSpec, Family, Params, ShiftSpec};
