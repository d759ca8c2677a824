//! The Pettitt statistic and the classical (asymptotic) test.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Classical,
    Bootstrap,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Classical => "classical",
            Method::Bootstrap => "bootstrap",
        }
    }
}

impl core::fmt::Display for Method {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of one test application.
///
/// `change_index` is 1-based and marks the last observation of the first
/// segment: the series splits into `1..=change_index` and
/// `change_index+1..=T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub k_stat: u64,
    pub change_index: usize,
    pub p_value: f64,
    pub method: Method,
    pub alpha: f64,
    pub rejected: bool,
}

impl TestResult {
    pub(crate) fn new(stat: PettittStatistic, p_value: f64, method: Method, alpha: f64) -> Self {
        Self {
            k_stat: stat.k_stat,
            change_index: stat.change_index,
            p_value,
            method,
            alpha,
            rejected: p_value < alpha,
        }
    }

    /// Decision at another significance level, reusing the same p value.
    pub fn rejects_at(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// `K = max_t |U_t|` and the smallest `t` attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PettittStatistic {
    pub k_stat: u64,
    pub change_index: usize,
}

pub fn sgn(x: f64) -> i64 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// `U_t = sum_{i<=t} sum_{j>t} sgn(X_i - X_j)`, evaluated directly.
pub fn pettitt_u(series: &TimeSeries, t: usize) -> Result<i64> {
    let n = series.len();
    if t == 0 || t >= n {
        return Err(Error::IndexOutOfRange {
            index: t,
            max: n.saturating_sub(1),
        });
    }
    let (head, tail) = series.split_at(t);
    Ok(head
        .iter()
        .map(|&xi| tail.iter().map(|&xj| sgn(xi - xj)).sum::<i64>())
        .sum())
}

/// For every observation, `sum_j sgn(X_i - X_j)` over the whole series,
/// i.e. (number of strictly smaller values) minus (number of strictly larger).
///
/// Computed from a sort in `O(T log T)`; equal values form one rank group.
pub(crate) fn sign_sums(values: &[f64]) -> Vec<i64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal));
    let mut out = alloc::vec![0i64; n];
    let mut start = 0;
    while start < n {
        let v = values[order[start]];
        let mut end = start + 1;
        while end < n && values[order[end]] == v {
            end += 1;
        }
        let d = start as i64 - (n - end) as i64;
        for &i in &order[start..end] {
            out[i] = d;
        }
        start = end;
    }
    out
}

/// Scan `U_t = U_{t-1} + d_t` for `t = 1..T-1` and return the maximum of
/// `|U_t|` with the earliest maximizing index.
pub(crate) fn scan_max(sign_sums: impl Iterator<Item = i64>, len: usize) -> PettittStatistic {
    let mut u = 0i64;
    let mut best = PettittStatistic {
        k_stat: 0,
        change_index: 1,
    };
    for (t, d) in (1..len).zip(sign_sums) {
        u += d;
        let k = u.unsigned_abs();
        if k > best.k_stat {
            best = PettittStatistic {
                k_stat: k,
                change_index: t,
            };
        }
    }
    best
}

/// The Pettitt statistic `K` and the most probable change point.
///
/// Uses the recursion `U_t = U_{t-1} + sum_j sgn(X_t - X_j)` with `U_0 = 0`.
/// Ties in `|U_t|` resolve to the smallest `t`.
pub fn pettitt_statistic(series: &TimeSeries) -> Result<PettittStatistic> {
    series.require_len(2)?;
    let d = sign_sums(series);
    Ok(scan_max(d.into_iter(), series.len()))
}

/// Asymptotic p value `2 exp(-6K^2 / (T^3 + T^2))`, clamped to at most 1.
pub fn approx_p_value(k_stat: u64, len: usize) -> f64 {
    let k = k_stat as f64;
    let n = len as f64;
    let p = 2.0 * libm::exp(-6.0 * k * k / (n * n * n + n * n));
    p.min(1.0)
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

pub fn classical_test(series: &TimeSeries, alpha: f64) -> Result<TestResult> {
    check_alpha(alpha)?;
    let stat = pettitt_statistic(series)?;
    let p = approx_p_value(stat.k_stat, series.len());
    Ok(TestResult::new(stat, p, Method::Classical, alpha))
}
