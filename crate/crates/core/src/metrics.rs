//! Forecast error measures and the simple statistical baselines.
//!
//! MAPE and SMAPE are plain fractions (no ×100) with the signed
//! denominators `y` and `ŷ + y`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The five error measures over `count` forecasts. A measure whose
/// precondition fails (zero actual for MAPE, zero `ŷ + y` for SMAPE,
/// constant actuals for NRMSE) is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport<T> {
    pub mad: T,
    pub mape: Option<T>,
    pub smape: Option<T>,
    pub rmse: T,
    pub nrmse: Option<T>,
    pub count: usize,
}

pub fn error_report<T: Scalar>(predicted: &[T], actual: &[T]) -> Result<ErrorReport<T>> {
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch {
            left: predicted.len(),
            right: actual.len(),
        });
    }
    if predicted.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = T::from_count(predicted.len());
    let pairs = || predicted.iter().zip(actual).map(|(&p, &a)| (p, a));

    let mad = pairs().map(|(p, a)| (p - a).abs()).sum::<T>() / n;
    let mape = if actual.iter().any(|&a| a == T::zero()) {
        None
    } else {
        Some(pairs().map(|(p, a)| (p - a).abs() / a).sum::<T>() / n)
    };
    let smape = if pairs().any(|(p, a)| p + a == T::zero()) {
        None
    } else {
        Some(T::lit(2.0) / n * pairs().map(|(p, a)| (p - a).abs() / (p + a)).sum::<T>())
    };
    let rmse = (pairs().map(|(p, a)| (p - a) * (p - a)).sum::<T>() / n).sqrt();
    let (lo, hi) = actual.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &a| {
        (lo.min(a), hi.max(a))
    });
    let nrmse = if hi == lo { None } else { Some(rmse / (hi - lo)) };

    Ok(ErrorReport {
        mad,
        mape,
        smape,
        rmse,
        nrmse,
        count: predicted.len(),
    })
}

/// Last observed value (random walk; identical to SMA with `k = 1`).
pub fn naive_forecast<T: Scalar>(history: &[T]) -> Result<T> {
    history.last().copied().ok_or(Error::EmptyInput)
}

pub fn sma_forecast<T: Scalar>(history: &[T], k: usize) -> Result<T> {
    if k == 0 {
        return Err(Error::InvalidConfig("SMA window must be positive".into()));
    }
    if history.len() < k {
        return Err(Error::TooFewValues {
            len: history.len(),
            needed: k,
        });
    }
    let tail = &history[history.len() - k..];
    Ok(tail.iter().copied().sum::<T>() / T::from_count(k))
}

/// Least-squares line `a + b·i` over indices `1..=t`, evaluated at `t + 1`.
pub fn ols_trend_forecast<T: Scalar>(history: &[T]) -> Result<T> {
    let t = history.len();
    if t < 2 {
        return Err(Error::TooFewValues { len: t, needed: 2 });
    }
    let n = T::from_count(t);
    let x_mean = (n + T::one()) / T::lit(2.0);
    let y_mean = history.iter().copied().sum::<T>() / n;
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for (i, &y) in history.iter().enumerate() {
        let dx = T::from_count(i + 1) - x_mean;
        sxy += dx * (y - y_mean);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    Ok(intercept + slope * (n + T::one()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    Naive,
    Sma(usize),
    OlsTrend,
}

impl Baseline {
    pub fn name(&self) -> String {
        match self {
            Baseline::Naive => "Naive".to_string(),
            Baseline::Sma(k) => format!("SMA(K={k})"),
            Baseline::OlsTrend => "OLS trend".to_string(),
        }
    }

    pub fn forecast<T: Scalar>(&self, history: &[T]) -> Result<T> {
        match *self {
            Baseline::Naive => naive_forecast(history),
            Baseline::Sma(k) => sma_forecast(history, k),
            Baseline::OlsTrend => ols_trend_forecast(history),
        }
    }

    /// Forecasts each 0-based position in `targets` from every value
    /// strictly before it.
    pub fn walk_forward<T: Scalar>(&self, values: &[T], targets: &[usize]) -> Result<Vec<T>> {
        targets
            .iter()
            .map(|&p| {
                if p > values.len() {
                    return Err(Error::TooFewValues {
                        len: values.len(),
                        needed: p,
                    });
                }
                self.forecast(&values[..p])
            })
            .collect()
    }
}

/// Method-by-measure table, one row per forecasting method.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ComparisonTable<T> {
    pub rows: Vec<(String, ErrorReport<T>)>,
}

const HEADER: [&str; 6] = ["method", "MAD", "MAPE", "SMAPE", "RMSE", "NRMSE"];

impl<T: Scalar> ComparisonTable<T> {
    pub fn push(&mut self, name: impl Into<String>, report: ErrorReport<T>) {
        self.rows.push((name.into(), report));
    }

    fn cells(report: &ErrorReport<T>) -> [String; 5] {
        let opt = |v: Option<T>| v.map_or_else(|| "undefined".to_string(), |x| x.to_string());
        [
            report.mad.to_string(),
            opt(report.mape),
            opt(report.smape),
            report.rmse.to_string(),
            opt(report.nrmse),
        ]
    }

    pub fn to_csv(&self) -> String {
        let mut out = HEADER.join(",");
        out.push('\n');
        for (name, r) in &self.rows {
            let _ = writeln!(out, "{},{}", csv_field(name), Self::cells(r).join(","));
        }
        out
    }

    /// Aligned plain-text rendering.
    pub fn to_text(&self) -> String {
        let body: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|(name, r)| {
                let mut row = vec![name.clone()];
                row.extend(Self::cells(r));
                row
            })
            .collect();
        let mut widths: Vec<usize> = HEADER.iter().map(|h| h.len()).collect();
        for row in &body {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let mut line = |cells: Vec<String>| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (c, &w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(HEADER.iter().map(|s| s.to_string()).collect());
        for row in body {
            line(row);
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
