//! Threshold-entry, fixed-duration pairs-trading backtests.
//!
//! Whenever the chosen return spread (first leg minus second leg) closes
//! strictly below the entry threshold k, a trade opens at that same
//! day's close: long `notional_per_leg` dollars of the first leg, short
//! the same notional of the second, for zero net cash outflow. The
//! position is liquidated at the close `duration` trading days later:
//!
//!   alpha = notional / P_left(entry)    beta = notional / P_right(entry)
//!   profit = alpha (P_left(exit) - P_left(entry))
//!          - beta  (P_right(exit) - P_right(entry))
//!
//! Trades may overlap; trades whose exit would fall past the last bar
//! are dropped rather than truncated so a grid cell never mixes holding
//! horizons. Entries and exits happen only at the close, and the entry
//! signal is evaluated on the same close the trade fills at. No
//! transaction costs, slippage, or financing are modeled.

use chrono::Datelike;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market_data::AlignedPair;
use crate::returns::{compute_returns, mean, sample_std, spread, Component, SpreadSeries};

/// Days-per-year used to normalize total profit to an annual figure.
pub const DAYS_PER_YEAR: f64 = 365.25;

/// Entry threshold, holding duration, and sizing for one strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyConfig {
    /// Enter when the spread is strictly below this level (a fraction,
    /// e.g. -0.005 for -0.5%).
    pub entry_threshold: f64,
    /// Trading days to hold before liquidating at the close.
    pub duration: usize,
    /// Dollar value of each leg at entry.
    pub notional_per_leg: f64,
    /// Which return spread generates signals. Daily (close to close) by
    /// default, matching entries and exits that happen only at the close.
    pub signal_component: Component,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        StrategyConfig {
            entry_threshold: 0.0,
            duration: 1,
            notional_per_leg: 100.0,
            signal_component: Component::Daily,
        }
    }
}

impl StrategyConfig {
    fn validate(&self) -> Result<()> {
        if !self.entry_threshold.is_finite() {
            return Err(Error::validation("entry threshold must be finite"));
        }
        if self.duration < 1 {
            return Err(Error::validation("holding duration must be at least 1 day"));
        }
        if self.notional_per_leg <= 0.0 || !self.notional_per_leg.is_finite() {
            return Err(Error::validation(format!(
                "notional per leg must be positive, got {}",
                self.notional_per_leg
            )));
        }
        Ok(())
    }
}

/// One executed round trip. Indices refer to bars of the aligned pair;
/// the entry index is the day whose close both triggered and filled the
/// trade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trade {
    pub entry_index: usize,
    pub exit_index: usize,
    pub entry_date: chrono::NaiveDate,
    pub exit_date: chrono::NaiveDate,
    /// Long-leg shares bought at entry.
    pub alpha: f64,
    /// Short-leg shares sold at entry.
    pub beta: f64,
    /// Dollar profit at liquidation.
    pub profit: f64,
}

/// Aggregated outcome of one (threshold, duration) strategy run.
///
/// Normalized figures are `None` when no trade executed. Total profit
/// equals `annual_return * span_years` and `per_trade_return * n_trades`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BacktestReport {
    pub config: StrategyConfig,
    #[serde(skip)]
    pub trades: Vec<Trade>,
    pub n_trades: usize,
    pub total_profit: f64,
    /// Total profit divided by the span of the data in years.
    pub annual_return: Option<f64>,
    /// Total profit divided by the number of trades.
    pub per_trade_return: Option<f64>,
    pub profit_mean: Option<f64>,
    /// Sample standard deviation of per-trade profits.
    pub profit_std: Option<f64>,
    /// Sample standard deviation of calendar-year profit sums (trades
    /// keyed by entry date; years without trades count as zero).
    pub annual_profit_std: Option<f64>,
    pub span_years: f64,
}

/// Indices whose spread value lies strictly below the threshold.
/// Overlapping entries are allowed, so every signal is returned.
pub fn generate_signals(spread: &SpreadSeries, threshold: f64) -> Vec<usize> {
    spread
        .values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| (*v < threshold).then_some(i))
        .collect()
}

/// Run one strategy over an adjusted, aligned pair.
pub fn run_strategy(pair: &AlignedPair, config: &StrategyConfig) -> Result<BacktestReport> {
    config.validate()?;
    let left_returns = compute_returns(pair.left(), config.signal_component)?;
    let right_returns = compute_returns(pair.right(), config.signal_component)?;
    let signal_spread = spread(&left_returns, &right_returns)?;
    let signals = generate_signals(&signal_spread, config.entry_threshold);

    let left_bars = pair.left().bars();
    let right_bars = pair.right().bars();
    let n_days = left_bars.len();

    let mut trades = Vec::with_capacity(signals.len());
    for signal_idx in signals {
        // Spread index i is dated on bar i + 1; the trade fills at that
        // same close.
        let entry = signal_idx + 1;
        let exit = entry + config.duration;
        if exit >= n_days {
            continue; // cannot complete inside the data; dropped
        }
        let p_left_entry = left_bars[entry].close;
        let p_right_entry = right_bars[entry].close;
        let alpha = config.notional_per_leg / p_left_entry;
        let beta = config.notional_per_leg / p_right_entry;
        let profit = alpha * (left_bars[exit].close - p_left_entry)
            - beta * (right_bars[exit].close - p_right_entry);
        trades.push(Trade {
            entry_index: entry,
            exit_index: exit,
            entry_date: left_bars[entry].date,
            exit_date: left_bars[exit].date,
            alpha,
            beta,
            profit,
        });
    }

    let span_days = (pair.left().last_date() - pair.left().first_date()).num_days();
    let span_years = span_days as f64 / DAYS_PER_YEAR;
    Ok(summarize(config, trades, span_years, pair))
}

fn summarize(
    config: &StrategyConfig,
    trades: Vec<Trade>,
    span_years: f64,
    pair: &AlignedPair,
) -> BacktestReport {
    let n_trades = trades.len();
    let profits: Vec<f64> = trades.iter().map(|t| t.profit).collect();
    let total_profit: f64 = profits.iter().sum();

    let (annual_return, per_trade_return, profit_mean, profit_std, annual_profit_std) =
        if n_trades == 0 {
            (None, None, None, None, None)
        } else {
            let annual = (span_years > 0.0).then(|| total_profit / span_years);
            let per_trade = total_profit / n_trades as f64;
            let p_std = (n_trades >= 2).then(|| sample_std(&profits));

            let first_year = pair.left().first_date().year();
            let last_year = pair.left().last_date().year();
            let mut year_sums = vec![0.0; (last_year - first_year + 1) as usize];
            for trade in &trades {
                year_sums[(trade.entry_date.year() - first_year) as usize] += trade.profit;
            }
            let y_std = (year_sums.len() >= 2).then(|| sample_std(&year_sums));

            (annual, Some(per_trade), Some(mean(&profits)), p_std, y_std)
        };

    BacktestReport {
        config: *config,
        trades,
        n_trades,
        total_profit,
        annual_return,
        per_trade_return,
        profit_mean,
        profit_std,
        annual_profit_std,
        span_years,
    }
}

/// How a scatter row normalizes profit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Annual,
    PerTrade,
}

impl std::fmt::Display for Normalization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Normalization::Annual => "annual",
            Normalization::PerTrade => "per_trade",
        })
    }
}

/// Risk/return coordinates of one grid cell under one normalization.
/// `std` is the across-year profit std for the annual normalization and
/// the per-trade profit std otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatterRow {
    pub threshold: f64,
    pub duration: usize,
    pub normalization: Normalization,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub n_trades: usize,
}

/// All reports of a (threshold x duration) sweep plus plot-ready
/// scatter rows.
#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    /// One report per cell, thresholds outer, durations inner.
    pub reports: Vec<BacktestReport>,
    pub scatter: Vec<ScatterRow>,
}

/// Entry thresholds swept in the default grid: 0% to -1.5% by -0.5%.
pub const DEFAULT_THRESHOLDS: [f64; 4] = [0.0, -0.005, -0.01, -0.015];

/// Holding durations swept in the default grid: 1 through 5 days.
pub const DEFAULT_DURATIONS: [usize; 5] = [1, 2, 3, 4, 5];

/// Run every (threshold, duration) cell. Cells are independent and
/// evaluated in parallel; output order is deterministic.
pub fn grid_run(
    pair: &AlignedPair,
    thresholds: &[f64],
    durations: &[usize],
    base: &StrategyConfig,
) -> Result<GridResult> {
    if thresholds.is_empty() || durations.is_empty() {
        return Err(Error::validation("grid axes must be non-empty"));
    }
    let cells: Vec<StrategyConfig> = thresholds
        .iter()
        .flat_map(|&k| {
            durations.iter().map(move |&n| StrategyConfig {
                entry_threshold: k,
                duration: n,
                ..*base
            })
        })
        .collect();

    let reports: Result<Vec<BacktestReport>> = cells
        .par_iter()
        .map(|config| run_strategy(pair, config))
        .collect();
    let reports = reports?;

    let scatter = reports
        .iter()
        .flat_map(|r| {
            [
                ScatterRow {
                    threshold: r.config.entry_threshold,
                    duration: r.config.duration,
                    normalization: Normalization::Annual,
                    mean: r.annual_return,
                    std: r.annual_profit_std,
                    n_trades: r.n_trades,
                },
                ScatterRow {
                    threshold: r.config.entry_threshold,
                    duration: r.config.duration,
                    normalization: Normalization::PerTrade,
                    mean: r.per_trade_return,
                    std: r.profit_std,
                    n_trades: r.n_trades,
                },
            ]
        })
        .collect();

    Ok(GridResult { reports, scatter })
}
