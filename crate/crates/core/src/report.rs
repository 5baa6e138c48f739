//! JSON and flat-CSV emitters for analysis results.
//!
//! Every emitter is deterministic: floats use shortest round-trip
//! formatting, JSON is pretty-printed with stable field order, and rows
//! follow input order. The CLI writes these byte streams verbatim, so
//! files on disk are reproducible from library calls alone.

use serde::Serialize;

use crate::backtest::{BacktestReport, ScatterRow, Trade};
use crate::error::Result;
use crate::market_data::PriceSeries;
use crate::ou::FitResult;
use crate::returns::{
    compute_returns, q_diagnostics, summary_stats, Component, QDiagnostics, QQData, ReturnStats,
    SpreadSeries,
};

/// Table-style summary for one ticker: per-component return statistics
/// plus the squared-returns-ratio mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub ticker: String,
    /// Shared number of return observations per component.
    pub n: usize,
    pub overnight: ReturnStats,
    pub intraday: ReturnStats,
    pub daily: ReturnStats,
    pub q_bar: Option<f64>,
    pub excluded_days: usize,
}

/// Compute the full per-ticker summary from an adjusted price series.
pub fn stats_report(series: &PriceSeries, bins: usize) -> Result<(StatsReport, QDiagnostics)> {
    let on = compute_returns(series, Component::Overnight)?;
    let id = compute_returns(series, Component::Intraday)?;
    let dd = compute_returns(series, Component::Daily)?;
    let q = q_diagnostics(&on, &id, bins)?;
    let report = StatsReport {
        ticker: series.ticker().to_string(),
        n: dd.len(),
        overnight: summary_stats(&on)?,
        intraday: summary_stats(&id)?,
        daily: summary_stats(&dd)?,
        q_bar: q.q_bar,
        excluded_days: q.excluded_days,
    };
    Ok((report, q))
}

/// Pretty JSON with a trailing newline.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report");
    text.push('\n');
    text
}

fn push_opt(out: &mut String, value: Option<f64>) {
    if let Some(v) = value {
        out.push_str(&v.to_string());
    }
}

/// One row per ticker with the per-component mean/std columns and q-bar.
pub fn stats_csv(report: &StatsReport) -> String {
    let mut out =
        String::from("ticker,n,on_mean,on_std,id_mean,id_std,dd_mean,dd_std,q_bar,excluded_days\n");
    out.push_str(&format!(
        "{},{},{},{},{},{},{},{},",
        report.ticker,
        report.n,
        report.overnight.mean,
        report.overnight.std,
        report.intraday.mean,
        report.intraday.std,
        report.daily.mean,
        report.daily.std,
    ));
    push_opt(&mut out, report.q_bar);
    out.push_str(&format!(",{}\n", report.excluded_days));
    out
}

/// One row per histogram bin: left edge, right edge, count.
pub fn q_histogram_csv(q: &QDiagnostics) -> String {
    let mut out = String::from("bin_left,bin_right,count\n");
    for (i, count) in q.histogram.counts.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{}\n",
            q.histogram.edges[i],
            q.histogram.edges[i + 1],
            count
        ));
    }
    out
}

/// One row per defined day: date, q.
pub fn q_series_csv(q: &QDiagnostics) -> String {
    let mut out = String::from("date,q\n");
    for (date, value) in q.dates.iter().zip(&q.q_values) {
        out.push_str(&format!("{date},{value}\n"));
    }
    out
}

/// One row per QQ point: theoretical quantile, standardized empirical.
pub fn qq_csv(qq: &QQData) -> String {
    let mut out = String::from("theoretical,empirical\n");
    for (theo, emp) in &qq.points {
        out.push_str(&format!("{theo},{emp}\n"));
    }
    out
}

/// Whether a fit row came from observed data or a simulated replay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitSource {
    Empirical,
    Simulated,
}

impl std::fmt::Display for FitSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FitSource::Empirical => "empirical",
            FitSource::Simulated => "simulated",
        })
    }
}

/// One row of the per-year fit table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRecord {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub year: Option<i32>,
    pub component: Component,
    pub source: FitSource,
    #[serde(flatten)]
    pub fit: FitResult,
}

impl FitRecord {
    pub fn new(fit: FitResult, component: Component, source: FitSource, year: Option<i32>) -> Self {
        FitRecord {
            year,
            component,
            source,
            fit,
        }
    }
}

/// Fit rows laid out one (year, component, source) per line.
pub fn fit_csv(records: &[FitRecord]) -> String {
    let mut out =
        String::from("year,component,source,theta,sigma,mu,avg_ll,n,start,end,dt,converged\n");
    for record in records {
        if let Some(year) = record.year {
            out.push_str(&year.to_string());
        }
        out.push_str(&format!(",{},{},", record.component, record.source));
        let p = record.fit.params;
        push_opt(&mut out, p.map(|p| p.theta));
        out.push(',');
        push_opt(&mut out, p.map(|p| p.sigma));
        out.push(',');
        push_opt(&mut out, p.map(|p| p.mu));
        out.push(',');
        push_opt(&mut out, record.fit.avg_log_likelihood);
        out.push_str(&format!(
            ",{},{},{},{},{}\n",
            record.fit.window.n,
            record.fit.window.start,
            record.fit.window.end,
            record.fit.dt,
            record.fit.converged
        ));
    }
    out
}

/// One row per (cell, normalization) with risk/return coordinates.
pub fn scatter_csv(rows: &[ScatterRow]) -> String {
    let mut out = String::from("k,duration,normalization,mean,std,n_trades\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},",
            row.threshold, row.duration, row.normalization
        ));
        push_opt(&mut out, row.mean);
        out.push(',');
        push_opt(&mut out, row.std);
        out.push_str(&format!(",{}\n", row.n_trades));
    }
    out
}

/// One row per executed trade.
pub fn trades_csv(trades: &[Trade]) -> String {
    let mut out = String::from("entry_index,exit_index,entry_date,exit_date,alpha,beta,profit\n");
    for t in trades {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            t.entry_index, t.exit_index, t.entry_date, t.exit_date, t.alpha, t.beta, t.profit
        ));
    }
    out
}

/// One row per observation of a (possibly simulated) spread.
pub fn spread_csv(spread: &SpreadSeries) -> String {
    let mut out = String::from("date,value\n");
    for (date, value) in spread.dates.iter().zip(&spread.values) {
        out.push_str(&format!("{date},{value}\n"));
    }
    out
}

/// Convenience wrapper serializing a backtest report (trades excluded;
/// they go to [`trades_csv`]).
pub fn backtest_json(report: &BacktestReport) -> String {
    to_json_pretty(report)
}
