//! `pairstat` — batch front end for the pair-returns toolkit.
//!
//! Every subcommand reads daily price CSVs (or fetches them), runs one
//! analysis, and writes its outputs plus a run manifest into a fresh
//! subdirectory of `--out`. Runs are deterministic given (inputs,
//! flags, seed).
//!
//! Exit codes: 0 success (warnings allowed), 1 usage error, 2
//! input/parse error, 3 internal numerical failure.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};

use pairstat::Component;

fn parse_component(s: &str) -> Result<Component, String> {
    Component::from_str(s)
}

fn parse_date(s: &str) -> Result<NaiveDate, String> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .map_err(|_| format!("'{s}' is not an ISO-8601 date (YYYY-MM-DD)"))
}

/// Accepts plain fractions ("-0.005") or percentages ("-0.5%").
fn parse_fraction(s: &str) -> Result<f64, String> {
    let trimmed = s.trim();
    let (body, scale) = match trimmed.strip_suffix('%') {
        Some(body) => (body, 0.01),
        None => (trimmed, 1.0),
    };
    body.trim()
        .parse::<f64>()
        .map(|v| v * scale)
        .map_err(|_| format!("'{s}' is not a number or percentage"))
}

#[derive(Debug, Parser)]
#[command(
    name = "pairstat",
    version,
    about = "Intraday/overnight return analytics, OU spread fits, and pairs-trading backtests"
)]
struct Cli {
    /// Root seed for anything stochastic; derived per-task seeds are
    /// seed + task index.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Directory that receives one subdirectory per run.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Cap worker threads (grid cells and yearly fits run in parallel).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Which report formats to write.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Both)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Both,
}

impl OutputFormat {
    fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }

    fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }
}

/// Column mapping shared by every file-reading command. Defaults match
/// the canonical `date,open,close,adj_close` layout.
#[derive(Debug, Clone, Args)]
struct SchemaArgs {
    #[arg(long, default_value = "date")]
    date_col: String,
    #[arg(long, default_value = "open")]
    open_col: String,
    #[arg(long, default_value = "close")]
    close_col: String,
    /// Column with adjusted closes (adj_factor := adj_close / close).
    #[arg(long, conflicts_with_all = ["adj_factor_col", "no_adjust"])]
    adj_close_col: Option<String>,
    /// Column carrying the adjustment factor directly.
    #[arg(long, conflicts_with = "no_adjust")]
    adj_factor_col: Option<String>,
    /// Input has no adjustment column; treat prices as already adjusted.
    #[arg(long)]
    no_adjust: bool,
}

impl SchemaArgs {
    fn to_schema(&self) -> pairstat::CsvSchema {
        let adjust = if self.no_adjust {
            pairstat::AdjustColumn::None
        } else if let Some(col) = &self.adj_factor_col {
            pairstat::AdjustColumn::Factor(col.clone())
        } else {
            let col = self
                .adj_close_col
                .clone()
                .unwrap_or_else(|| "adj_close".to_string());
            pairstat::AdjustColumn::AdjClose(col)
        };
        pairstat::CsvSchema {
            date: self.date_col.clone(),
            open: self.open_col.clone(),
            close: self.close_col.clone(),
            adjust,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-component return statistics and the squared-returns ratio.
    Stats {
        /// Daily price CSV.
        prices: PathBuf,
        /// Histogram bins for the q ratio.
        #[arg(long, default_value_t = 50)]
        bins: usize,
        /// Ticker label (defaults to the file stem).
        #[arg(long)]
        ticker: Option<String>,
        #[command(flatten)]
        schema: SchemaArgs,
    },

    /// Squared-returns-ratio series and histogram.
    Qratio {
        prices: PathBuf,
        #[arg(long, default_value_t = 50)]
        bins: usize,
        #[arg(long)]
        ticker: Option<String>,
        #[command(flatten)]
        schema: SchemaArgs,
    },

    /// Normal QQ data for one return component.
    Qq {
        prices: PathBuf,
        #[arg(long, value_parser = parse_component, default_value = "dd")]
        component: Component,
        #[arg(long)]
        ticker: Option<String>,
        #[command(flatten)]
        schema: SchemaArgs,
    },

    /// Fit the OU model to the return spread of a pair.
    Fit {
        /// Long-leg price CSV (the spread is left minus right).
        adr: PathBuf,
        /// Benchmark-leg price CSV.
        spy: PathBuf,
        #[arg(long, value_parser = parse_component, default_value = "dd")]
        component: Component,
        /// Fit each calendar year separately.
        #[arg(long)]
        yearly: bool,
        /// Also simulate each converged fit and re-estimate.
        #[arg(long)]
        refit: bool,
        /// Observation interval in days.
        #[arg(long, default_value_t = 1.0)]
        dt: f64,
        #[command(flatten)]
        schema: SchemaArgs,
    },

    /// Simulate an OU path with exact transitions.
    Simulate {
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        sigma: f64,
        /// Starting value (defaults to theta).
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<f64>,
        /// Number of transitions to draw.
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1.0)]
        dt: f64,
    },

    /// Backtest one (threshold, duration) strategy cell.
    Backtest {
        adr: PathBuf,
        spy: PathBuf,
        /// Entry threshold, fraction or percentage (e.g. -0.005 or -0.5%).
        #[arg(long, value_parser = parse_fraction, allow_hyphen_values = true, default_value = "0")]
        k: f64,
        /// Trading days to hold.
        #[arg(long, default_value_t = 1)]
        duration: usize,
        #[arg(long, default_value_t = 100.0)]
        notional: f64,
        #[arg(long, value_parser = parse_component, default_value = "dd")]
        component: Component,
        #[command(flatten)]
        schema: SchemaArgs,
    },

    /// Backtest a full threshold x duration grid.
    Grid {
        adr: PathBuf,
        spy: PathBuf,
        /// Comma-separated thresholds (fractions or percentages).
        #[arg(
            long,
            value_parser = parse_fraction,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "0,-0.5%,-1%,-1.5%"
        )]
        ks: Vec<f64>,
        /// Comma-separated holding durations in days.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        durations: Vec<usize>,
        #[arg(long, default_value_t = 100.0)]
        notional: f64,
        #[arg(long, value_parser = parse_component, default_value = "dd")]
        component: Component,
        #[command(flatten)]
        schema: SchemaArgs,
    },

    /// Fetch a price CSV over HTTP and store it in canonical form.
    Fetch {
        ticker: String,
        /// URL template with {ticker}, {start}, {end} placeholders;
        /// falls back to the PAIRSTAT_FETCH_URL environment variable.
        #[arg(long)]
        url_template: Option<String>,
        #[arg(long, value_parser = parse_date)]
        start: NaiveDate,
        #[arg(long, value_parser = parse_date)]
        end: NaiveDate,
        #[command(flatten)]
        schema: SchemaArgs,
    },
}

/// Error category determining the process exit code.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(String),
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Input(msg) => write!(f, "{msg}"),
            CliError::Numerical(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<pairstat::Error> for CliError {
    fn from(err: pairstat::Error) -> Self {
        match err {
            pairstat::Error::Evaluation(_) => CliError::Numerical(err.to_string()),
            _ => CliError::Input(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Input(format!("i/o error: {err}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    if let Some(threads) = cli.threads {
        // Ignore the error if a pool already exists (tests call run()
        // repeatedly in-process).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("pairstat: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
