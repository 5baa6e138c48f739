//! Decomposition of daily equity returns into intraday and overnight
//! legs, Ornstein-Uhlenbeck modeling of return spreads, and
//! threshold-entry pairs-trading backtests.
//!
//! The pipeline runs ingest -> adjust -> align -> decompose -> analyze:
//!
//! ```no_run
//! use pairstat::{align, adjust, compute_returns, fit_mle, parse_csv,
//!                spread, Component, CsvSchema};
//!
//! # fn main() -> pairstat::Result<()> {
//! let adr = adjust(&parse_csv(std::fs::File::open("adr.csv")?, &CsvSchema::default(), "ADR")?);
//! let spy = adjust(&parse_csv(std::fs::File::open("spy.csv")?, &CsvSchema::default(), "SPY")?);
//! let pair = align(&adr, &spy)?;
//! let x = spread(
//!     &compute_returns(pair.left(), Component::Daily)?,
//!     &compute_returns(pair.right(), Component::Daily)?,
//! )?;
//! let fit = fit_mle(&x, 1.0)?;
//! println!("{}", pairstat::report::to_json_pretty(&fit));
//! # Ok(())
//! # }
//! ```
//!
//! All computations are pure functions of their inputs; anything random
//! takes an explicit seed, so results are reproducible bit for bit.

pub mod backtest;
pub mod error;
pub mod market_data;
pub mod ou;
pub mod report;
pub mod returns;

pub use backtest::{
    generate_signals, grid_run, run_strategy, BacktestReport, GridResult, Normalization,
    ScatterRow, StrategyConfig, Trade, DEFAULT_DURATIONS, DEFAULT_THRESHOLDS,
};
pub use error::{Error, Result};
pub use market_data::{
    adjust, align, fetch_csv, parse_csv, to_csv_string, write_csv, AdjustColumn, AlignedPair, Bar,
    CsvSchema, PriceSeries,
};
pub use ou::{
    avg_log_likelihood, fit_mle, fit_yearly, likelihood_gradient, simulate, simulate_refit,
    transition_params, FitResult, FitWindow, OuParams, SkippedYear, Transition, YearlyFits,
    GRADIENT_TOL, MIN_YEARLY_OBS,
};
pub use returns::{
    compute_returns, correlation, q_diagnostics, qq_data, spread, summary_stats, Component,
    Histogram, QDiagnostics, QQData, ReturnSeries, ReturnStats, SpreadSeries,
};
