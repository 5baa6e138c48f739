//! Ingestion, validation, adjustment, and alignment of daily price series.
//!
//! A [`PriceSeries`] holds date-ordered daily bars (open, close, and a
//! cumulative split/dividend adjustment factor). [`adjust`] applies the
//! factor to *both* open and close so intraday returns are unchanged and
//! the overnight/daily compounding identity holds on the adjusted series.
//! [`align`] restricts two series to their common trading dates, which is
//! the prerequisite for any pair analysis.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};
use std::time::Duration;

use chrono::NaiveDate;

use crate::error::{Error, Result};

const DATE_FORMAT: &str = "%Y-%m-%d";

/// One trading day of raw data for a ticker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bar {
    pub date: NaiveDate,
    /// Opening price in USD, > 0.
    pub open: f64,
    /// Closing price in USD, > 0.
    pub close: f64,
    /// Cumulative split/dividend multiplier, > 0. Adjusted price =
    /// raw price x adj_factor.
    pub adj_factor: f64,
}

impl Bar {
    pub fn new(date: NaiveDate, open: f64, close: f64, adj_factor: f64) -> Result<Self> {
        if open <= 0.0 || !open.is_finite() {
            return Err(Error::validation(format!(
                "{date}: open must be positive and finite, got {open}"
            )));
        }
        if close <= 0.0 || !close.is_finite() {
            return Err(Error::validation(format!(
                "{date}: close must be positive and finite, got {close}"
            )));
        }
        if adj_factor <= 0.0 || !adj_factor.is_finite() {
            return Err(Error::validation(format!(
                "{date}: adj_factor must be positive and finite, got {adj_factor}"
            )));
        }
        Ok(Bar {
            date,
            open,
            close,
            adj_factor,
        })
    }
}

/// Date-ordered daily bars for one ticker.
///
/// Invariants: non-empty, dates strictly increasing, no duplicates.
/// The constructor sorts its input and rejects duplicate dates.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    ticker: String,
    bars: Vec<Bar>,
}

impl PriceSeries {
    pub fn new(ticker: impl Into<String>, mut bars: Vec<Bar>) -> Result<Self> {
        if bars.is_empty() {
            return Err(Error::validation("empty series"));
        }
        bars.sort_by_key(|b| b.date);
        for pair in bars.windows(2) {
            if pair[0].date == pair[1].date {
                return Err(Error::validation(format!(
                    "duplicate date {}",
                    pair[0].date
                )));
            }
        }
        Ok(PriceSeries {
            ticker: ticker.into(),
            bars,
        })
    }

    pub fn ticker(&self) -> &str {
        &self.ticker
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.bars.iter().map(|b| b.date)
    }

    pub fn first_date(&self) -> NaiveDate {
        self.bars[0].date
    }

    pub fn last_date(&self) -> NaiveDate {
        self.bars[self.bars.len() - 1].date
    }

    /// True when every bar carries adj_factor == 1.
    pub fn is_adjusted(&self) -> bool {
        self.bars.iter().all(|b| b.adj_factor == 1.0)
    }
}

/// Two price series restricted to identical trading dates.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedPair {
    left: PriceSeries,
    right: PriceSeries,
}

impl AlignedPair {
    pub fn left(&self) -> &PriceSeries {
        &self.left
    }

    pub fn right(&self) -> &PriceSeries {
        &self.right
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }
}

/// Where the adjustment information lives in a CSV file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdjustColumn {
    /// Column holds the adjusted close; adj_factor := adj_close / close.
    AdjClose(String),
    /// Column holds the multiplier directly.
    Factor(String),
    /// No adjustment data; adj_factor := 1 on every row.
    None,
}

/// Column mapping for [`parse_csv`]. The default matches the canonical
/// layout `date,open,close,adj_close` with ISO-8601 dates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvSchema {
    pub date: String,
    pub open: String,
    pub close: String,
    pub adjust: AdjustColumn,
}

impl Default for CsvSchema {
    fn default() -> Self {
        CsvSchema {
            date: "date".to_string(),
            open: "open".to_string(),
            close: "close".to_string(),
            adjust: AdjustColumn::AdjClose("adj_close".to_string()),
        }
    }
}

impl CsvSchema {
    /// Schema for files without any adjustment column.
    pub fn bare() -> Self {
        CsvSchema {
            adjust: AdjustColumn::None,
            ..CsvSchema::default()
        }
    }
}

fn header_index(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::parse(0, format!("column '{name}' not found in header")))
}

fn parse_price(field: &str, name: &str, row: usize) -> Result<f64> {
    let value: f64 = field
        .trim()
        .parse()
        .map_err(|_| Error::parse(row, format!("{name} '{field}' is not a number")))?;
    if value <= 0.0 || !value.is_finite() {
        return Err(Error::validation(format!(
            "row {row}: {name} must be positive, got {value}"
        )));
    }
    Ok(value)
}

/// Parse daily bars from CSV text. Rows may arrive in any order; the
/// result is sorted ascending by date. Duplicate dates and nonpositive
/// prices are rejected.
pub fn parse_csv<R: Read>(source: R, schema: &CsvSchema, ticker: &str) -> Result<PriceSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let headers = reader
        .headers()
        .map_err(|e| Error::parse(0, format!("unreadable header: {e}")))?
        .clone();
    let date_idx = header_index(&headers, &schema.date)?;
    let open_idx = header_index(&headers, &schema.open)?;
    let close_idx = header_index(&headers, &schema.close)?;
    let adjust_idx = match &schema.adjust {
        AdjustColumn::AdjClose(name) => Some(header_index(&headers, name)?),
        AdjustColumn::Factor(name) => Some(header_index(&headers, name)?),
        AdjustColumn::None => None,
    };

    let mut bars = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::parse(row, format!("malformed record: {e}")))?;
        let field = |idx: usize| -> Result<&str> {
            record
                .get(idx)
                .ok_or_else(|| Error::parse(row, format!("missing field {idx}")))
        };

        let date_str = field(date_idx)?;
        let date = NaiveDate::parse_from_str(date_str, DATE_FORMAT)
            .map_err(|_| Error::parse(row, format!("unparseable date '{date_str}'")))?;
        let open = parse_price(field(open_idx)?, &schema.open, row)?;
        let close = parse_price(field(close_idx)?, &schema.close, row)?;
        let adj_factor = match (&schema.adjust, adjust_idx) {
            (AdjustColumn::AdjClose(name), Some(idx)) => {
                parse_price(field(idx)?, name, row)? / close
            }
            (AdjustColumn::Factor(name), Some(idx)) => parse_price(field(idx)?, name, row)?,
            _ => 1.0,
        };

        bars.push(Bar::new(date, open, close, adj_factor)?);
    }

    PriceSeries::new(ticker, bars)
}

/// Write a series in the canonical `date,open,close,adj_close` layout.
/// Floats are printed with shortest round-trip formatting so a
/// parse-back recovers the same values.
pub fn write_csv<W: Write>(series: &PriceSeries, mut writer: W) -> Result<()> {
    writeln!(writer, "date,open,close,adj_close")?;
    for bar in series.bars() {
        writeln!(
            writer,
            "{},{},{},{}",
            bar.date.format(DATE_FORMAT),
            bar.open,
            bar.close,
            bar.close * bar.adj_factor
        )?;
    }
    Ok(())
}

pub fn to_csv_string(series: &PriceSeries) -> String {
    let mut buf = Vec::new();
    write_csv(series, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("canonical CSV is UTF-8")
}

/// Fetch a CSV over plain HTTP(S) and parse it. `url_template` may use
/// the placeholders `{ticker}`, `{start}`, `{end}`.
pub fn fetch_csv(
    url_template: &str,
    ticker: &str,
    date_range: (NaiveDate, NaiveDate),
    schema: &CsvSchema,
) -> Result<PriceSeries> {
    let url = url_template
        .replace("{ticker}", ticker)
        .replace("{start}", &date_range.0.format(DATE_FORMAT).to_string())
        .replace("{end}", &date_range.1.format(DATE_FORMAT).to_string());

    let client = reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs(30))
        .build()
        .map_err(|e| Error::Transport(e.to_string()))?;
    let response = client
        .get(&url)
        .send()
        .map_err(|e| Error::Transport(format!("GET {url}: {e}")))?;
    let status = response.status();
    if !status.is_success() {
        return Err(Error::Transport(format!("GET {url}: HTTP {status}")));
    }
    let body = response
        .text()
        .map_err(|e| Error::Transport(format!("reading body of {url}: {e}")))?;

    parse_csv(body.as_bytes(), schema, ticker)
}

/// Apply each bar's adjustment factor to both open and close, leaving
/// adj_factor = 1 everywhere. Multiplying both prices by the same factor
/// preserves intraday returns exactly and keeps the compounding identity
/// (1 + R_ON)(1 + R_ID) = 1 + R_DD intact across bars.
pub fn adjust(series: &PriceSeries) -> PriceSeries {
    let bars = series
        .bars()
        .iter()
        .map(|b| Bar {
            date: b.date,
            open: b.open * b.adj_factor,
            close: b.close * b.adj_factor,
            adj_factor: 1.0,
        })
        .collect();
    PriceSeries {
        ticker: series.ticker.clone(),
        bars,
    }
}

/// Restrict both series to the intersection of their date sets. Dates
/// present in only one series are dropped; forward-filling would
/// fabricate zero returns.
pub fn align(a: &PriceSeries, b: &PriceSeries) -> Result<AlignedPair> {
    let dates_a: BTreeSet<NaiveDate> = a.dates().collect();
    let dates_b: BTreeSet<NaiveDate> = b.dates().collect();
    let common: BTreeSet<NaiveDate> = dates_a.intersection(&dates_b).copied().collect();
    if common.len() < 2 {
        return Err(Error::validation(format!(
            "{} and {} share only {} trading date(s); need at least 2",
            a.ticker(),
            b.ticker(),
            common.len()
        )));
    }

    let restrict = |s: &PriceSeries| PriceSeries {
        ticker: s.ticker.clone(),
        bars: s
            .bars()
            .iter()
            .filter(|bar| common.contains(&bar.date))
            .copied()
            .collect(),
    };

    Ok(AlignedPair {
        left: restrict(a),
        right: restrict(b),
    })
}

/// Count of observations per calendar year, useful for partition checks.
pub fn bars_per_year(series: &PriceSeries) -> BTreeMap<i32, usize> {
    use chrono::Datelike;
    let mut counts = BTreeMap::new();
    for bar in series.bars() {
        *counts.entry(bar.date.year()).or_insert(0) += 1;
    }
    counts
}
