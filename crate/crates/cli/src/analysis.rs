//! The `test` workflow: both tests on a user series, optionally after
//! prewhitening, with the change point mapped back to the input labels.

use std::fmt::Write as _;

use pettitt_core::bootstrap::both_tests;
use pettitt_core::{prewhiten_pipeline_gated, BootstrapConfig, Gate, PrewhitenReport, Prewhitened, TestResult};

use crate::error::Result;
use crate::fmt_num;
use crate::input::LabeledSeries;

#[derive(Debug, Clone, PartialEq)]
pub struct TestOptions {
    /// The first level drives the prewhitening gate; all levels get decisions.
    pub alphas: Vec<f64>,
    pub resamples: usize,
    pub seed: u64,
    pub prewhiten: bool,
    pub gate: Gate,
}

impl Default for TestOptions {
    fn default() -> Self {
        Self {
            alphas: vec![0.05],
            resamples: BootstrapConfig::DEFAULT_RESAMPLES,
            seed: crate::DEFAULT_SEED,
            prewhiten: false,
            gate: Gate::Classical,
        }
    }
}

impl TestOptions {
    pub fn primary_alpha(&self) -> f64 {
        self.alphas.first().copied().unwrap_or(0.05)
    }
}

/// Location of the most probable change point on the input series.
#[derive(Debug, Clone, PartialEq)]
pub struct ChangeSummary {
    /// 1-based index of the last observation of the first segment.
    pub index: usize,
    pub label: String,
    pub tau_pct: f64,
    pub mean_before: f64,
    pub mean_after: f64,
    /// `(mean_after - mean_before) / mean_before` in percent; `None` when the
    /// first segment has zero mean.
    pub shift_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestReport {
    pub len: usize,
    pub cv_pct: f64,
    pub original_classical: TestResult,
    pub original_bootstrap: TestResult,
    pub prewhiten: Option<PrewhitenReport>,
    pub change: ChangeSummary,
    pub options: TestOptions,
}

impl TestReport {
    pub fn stopped_early(&self) -> bool {
        self.prewhiten.as_ref().is_some_and(PrewhitenReport::stopped_early)
    }

    fn prewhitened(&self) -> Option<&Prewhitened> {
        self.prewhiten.as_ref().and_then(|p| p.prewhitened.as_ref())
    }

    /// The tests whose decisions count: on the prewhitened series when it
    /// exists, otherwise on the original data.
    pub fn final_tests(&self) -> (TestResult, TestResult) {
        match self.prewhitened() {
            Some(p) => (p.final_classical, p.final_bootstrap),
            None => (self.original_classical, self.original_bootstrap),
        }
    }

    pub fn detected(&self, method_bootstrap: bool) -> bool {
        if self.stopped_early() {
            return false;
        }
        let (c, b) = self.final_tests();
        if method_bootstrap {
            b.rejected
        } else {
            c.rejected
        }
    }
}

fn sample_cv_pct(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let m = values.iter().sum::<f64>() / n;
    if n < 2.0 || m == 0.0 {
        return f64::NAN;
    }
    let var = values.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    100.0 * var.sqrt() / m.abs()
}

fn summarize_change(data: &LabeledSeries, index: usize) -> ChangeSummary {
    let (before, after) = data.series.split_at(index);
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (mb, ma) = (mean(before), mean(after));
    ChangeSummary {
        index,
        label: data.label(index).to_string(),
        tau_pct: 100.0 * index as f64 / data.series.len() as f64,
        mean_before: mb,
        mean_after: ma,
        shift_pct: (mb != 0.0).then(|| 100.0 * (ma - mb) / mb),
    }
}

pub fn analyze(data: &LabeledSeries, options: &TestOptions) -> Result<TestReport> {
    let alpha = options.primary_alpha();
    let config = BootstrapConfig::new(options.resamples, options.seed)?;
    let (original_classical, original_bootstrap) = both_tests(&data.series, alpha, config)?;
    let prewhiten = if options.prewhiten {
        Some(prewhiten_pipeline_gated(&data.series, alpha, config, options.gate)?)
    } else {
        None
    };
    let index = match prewhiten.as_ref().and_then(|p| p.prewhitened.as_ref()) {
        Some(p) => Prewhitened::original_index(p.final_classical.change_index),
        None => original_classical.change_index,
    };
    Ok(TestReport {
        len: data.series.len(),
        cv_pct: sample_cv_pct(&data.series),
        original_classical,
        original_bootstrap,
        change: summarize_change(data, index),
        prewhiten,
        options: options.clone(),
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

fn opt_num(x: Option<f64>, decimals: usize) -> String {
    match x {
        Some(v) if v.is_finite() => fmt_num(v, decimals),
        _ => "NA".to_string(),
    }
}

fn p_fmt(p: f64) -> String {
    if p >= 1e-4 {
        format!("{p:.5}")
    } else {
        format!("{p:.3e}")
    }
}

impl TestReport {
    pub fn render_text(&self, source_name: &str) -> String {
        let mut s = String::new();
        let o = &self.options;
        let _ = writeln!(s, "Pettitt change-point analysis of {source_name}");
        let _ = writeln!(s, "T = {}, CV = {}%", self.len, opt_num(Some(self.cv_pct), 1));
        let _ = writeln!(s, "bootstrap resamples = {}, seed = {}", o.resamples, o.seed);
        let _ = writeln!(s, "change point = label of the last observation before the change");
        s.push('\n');
        let _ = writeln!(s, "original series:");
        let _ = writeln!(
            s,
            "  classical  K = {:<6} p = {}",
            self.original_classical.k_stat,
            p_fmt(self.original_classical.p_value)
        );
        let _ = writeln!(
            s,
            "  bootstrap  K = {:<6} p = {}",
            self.original_bootstrap.k_stat,
            p_fmt(self.original_bootstrap.p_value)
        );
        if let Some(pw) = &self.prewhiten {
            let gate = match o.gate {
                Gate::Classical => "classical",
                Gate::Bootstrap => "bootstrap",
            };
            match &pw.prewhitened {
                None => {
                    let _ = writeln!(
                        s,
                        "prewhitening: no change detected by the {gate} test at alpha = {}; analysis stopped",
                        fmt_num(o.primary_alpha(), 6)
                    );
                }
                Some(p) => {
                    let _ = writeln!(
                        s,
                        "prewhitening: delta = {}, rho = {}, rho* = {}",
                        fmt_num(p.delta, 4),
                        fmt_num(p.rho_hat, 4),
                        fmt_num(p.rho_star, 4)
                    );
                    let _ = writeln!(s, "prewhitened series (T = {}):", p.series.len());
                    let _ = writeln!(
                        s,
                        "  classical  K = {:<6} p = {}",
                        p.final_classical.k_stat,
                        p_fmt(p.final_classical.p_value)
                    );
                    let _ = writeln!(
                        s,
                        "  bootstrap  K = {:<6} p = {}",
                        p.final_bootstrap.k_stat,
                        p_fmt(p.final_bootstrap.p_value)
                    );
                }
            }
        }
        s.push('\n');
        let (c, b) = self.final_tests();
        let stopped = self.stopped_early();
        let _ = writeln!(s, "alpha      classical  bootstrap");
        for &a in &o.alphas {
            let (dc, db) = if stopped {
                (false, false)
            } else {
                (c.rejects_at(a), b.rejects_at(a))
            };
            let _ = writeln!(s, "{:<10} {:<10} {}", fmt_num(a, 6), yes_no(dc), yes_no(db));
        }
        s.push('\n');
        let ch = &self.change;
        let _ = writeln!(
            s,
            "most probable change point: {} (index {}, tau = {}%)",
            ch.label,
            ch.index,
            fmt_num(ch.tau_pct, 1)
        );
        let _ = writeln!(
            s,
            "mean before = {}, mean after = {}, S = {}%",
            fmt_num(ch.mean_before, 4),
            fmt_num(ch.mean_after, 4),
            opt_num(ch.shift_pct, 2)
        );
        let verdict = if self.detected(false) || self.detected(true) {
            "change detected"
        } else {
            "no change"
        };
        let _ = writeln!(s, "result at alpha = {}: {verdict}", fmt_num(o.primary_alpha(), 6));
        s
    }

    /// One row per (stage, method, alpha).
    pub fn results_csv(&self) -> String {
        let mut s = String::from("stage,method,T,k_stat,change_index,change_label,p_value,alpha,rejected\n");
        let mut push = |stage: &str, r: &TestResult, len: usize, index: usize, label: &str, gated_off: bool| {
            for &a in &self.options.alphas {
                let rejected = !gated_off && r.rejects_at(a);
                let _ = writeln!(
                    s,
                    "{stage},{},{len},{},{index},{label},{},{},{rejected}",
                    r.method,
                    r.k_stat,
                    r.p_value,
                    fmt_num(a, 6)
                );
            }
        };
        let oc = self.original_classical.change_index;
        let label = |i: usize| self.change_label_for(i);
        push("original", &self.original_classical, self.len, oc, &label(oc), false);
        push("original", &self.original_bootstrap, self.len, oc, &label(oc), false);
        if let Some(p) = self.prewhitened() {
            let idx = Prewhitened::original_index(p.final_classical.change_index);
            push(
                "prewhitened",
                &p.final_classical,
                p.series.len(),
                idx,
                &label(idx),
                false,
            );
            push(
                "prewhitened",
                &p.final_bootstrap,
                p.series.len(),
                idx,
                &label(idx),
                false,
            );
        }
        s
    }

    fn change_label_for(&self, index: usize) -> String {
        if index == self.change.index {
            self.change.label.clone()
        } else {
            index.to_string()
        }
    }

    pub fn summary_csv(&self) -> String {
        let p = self.prewhitened();
        let ch = &self.change;
        let rows: Vec<(&str, String)> = vec![
            ("T", self.len.to_string()),
            ("cv_pct", opt_num(Some(self.cv_pct), 6)),
            ("alpha", fmt_num(self.options.primary_alpha(), 6)),
            ("B", self.options.resamples.to_string()),
            ("seed", self.options.seed.to_string()),
            ("prewhiten", self.prewhiten.is_some().to_string()),
            ("stopped_early", self.stopped_early().to_string()),
            ("delta", opt_num(p.map(|p| p.delta), 8)),
            ("rho_hat", opt_num(p.map(|p| p.rho_hat), 8)),
            ("rho_star", opt_num(p.map(|p| p.rho_star), 8)),
            ("change_index", ch.index.to_string()),
            ("change_label", ch.label.clone()),
            ("tau_pct", fmt_num(ch.tau_pct, 6)),
            ("mean_before", fmt_num(ch.mean_before, 8)),
            ("mean_after", fmt_num(ch.mean_after, 8)),
            ("shift_pct", opt_num(ch.shift_pct, 6)),
            ("detected_classical", self.detected(false).to_string()),
            ("detected_bootstrap", self.detected(true).to_string()),
        ];
        let mut s = String::from("key,value\n");
        for (k, v) in rows {
            let _ = writeln!(s, "{k},{v}");
        }
        s
    }
}
