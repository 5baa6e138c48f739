//! Return decomposition and distribution diagnostics.
//!
//! Daily price motion splits into an overnight leg (prior close to open)
//! and an intraday leg (open to close):
//!
//!   R_ID(i) = (close_i - open_i) / open_i
//!   R_ON(i) = (open_i - close_{i-1}) / close_{i-1}
//!   R_DD(i) = (close_i - close_{i-1}) / close_{i-1}
//!
//! so that (1 + R_ON)(1 + R_ID) = 1 + R_DD on an adjusted series. All
//! three components share the index set i = 1..N-1 of an N-day series;
//! day 0 only seeds the first overnight/daily return.
//!
//! The squared-returns ratio q = R_ON^2 / (R_ID^2 + R_ON^2) measures the
//! overnight share of each day's variability and always lies in [0, 1].

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::market_data::PriceSeries;

/// Which leg of the daily price motion a series measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Component {
    #[serde(rename = "on")]
    Overnight,
    #[serde(rename = "id")]
    Intraday,
    #[serde(rename = "dd")]
    Daily,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::Overnight, Component::Intraday, Component::Daily];

    pub fn code(self) -> &'static str {
        match self {
            Component::Overnight => "on",
            Component::Intraday => "id",
            Component::Daily => "dd",
        }
    }
}

impl std::fmt::Display for Component {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

impl std::str::FromStr for Component {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "on" | "overnight" => Ok(Component::Overnight),
            "id" | "intraday" => Ok(Component::Intraday),
            "dd" | "daily" => Ok(Component::Daily),
            other => Err(format!("unknown component '{other}' (expected on|id|dd)")),
        }
    }
}

/// Dated simple returns for one component. Series built by
/// [`compute_returns`] always satisfy value > -1 because prices are
/// positive; hand-built diagnostic series only need finite values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnSeries {
    pub component: Component,
    pub dates: Vec<NaiveDate>,
    pub values: Vec<f64>,
}

impl ReturnSeries {
    pub fn new(component: Component, dates: Vec<NaiveDate>, values: Vec<f64>) -> Result<Self> {
        check_dated_values(&dates, &values)?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("returns must be finite"));
        }
        Ok(ReturnSeries {
            component,
            dates,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Dated return differences between two legs of a pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpreadSeries {
    pub component: Component,
    pub dates: Vec<NaiveDate>,
    pub values: Vec<f64>,
}

impl SpreadSeries {
    pub fn new(component: Component, dates: Vec<NaiveDate>, values: Vec<f64>) -> Result<Self> {
        check_dated_values(&dates, &values)?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("spread values must be finite"));
        }
        Ok(SpreadSeries {
            component,
            dates,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_dated_values(dates: &[NaiveDate], values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::validation("series must hold at least one value"));
    }
    if dates.len() != values.len() {
        return Err(Error::validation(format!(
            "dates ({}) and values ({}) differ in length",
            dates.len(),
            values.len()
        )));
    }
    if dates.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("dates must be strictly increasing"));
    }
    Ok(())
}

/// Sample mean and standard deviation of a return series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnStats {
    pub mean: f64,
    /// Sample standard deviation (n-1 denominator).
    pub std: f64,
    pub n: usize,
}

/// Squared-returns-ratio diagnostics: the per-day overnight share of
/// variability, its mean, and a histogram over [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QDiagnostics {
    /// Dates on which q is defined (at least one of R_ON, R_ID nonzero).
    pub dates: Vec<NaiveDate>,
    pub q_values: Vec<f64>,
    /// Mean of q over defined days; None when every day was excluded.
    pub q_bar: Option<f64>,
    /// Days dropped because R_ID = R_ON = 0 (q would be 0/0).
    pub excluded_days: usize,
    pub histogram: Histogram,
}

/// Equal-width histogram over [0, 1]; the last bin is right-closed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    /// bins + 1 edges from 0 to 1.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Standard-normal QQ pairs: (theoretical quantile, standardized
/// empirical quantile), both nondecreasing. The reference line is the
/// identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QQData {
    pub points: Vec<(f64, f64)>,
}

/// Compute one return component from an adjusted price series. The
/// output has length `series.len() - 1`; the value at index i is dated
/// on day i+1 of the price series so all components share one index set.
pub fn compute_returns(series: &PriceSeries, component: Component) -> Result<ReturnSeries> {
    if series.len() < 2 {
        return Err(Error::validation(format!(
            "need at least 2 days of prices, got {}",
            series.len()
        )));
    }
    if !series.is_adjusted() {
        return Err(Error::validation(
            "series carries adj_factor != 1; apply adjust() before computing returns",
        ));
    }

    let bars = series.bars();
    let mut dates = Vec::with_capacity(bars.len() - 1);
    let mut values = Vec::with_capacity(bars.len() - 1);
    for pair in bars.windows(2) {
        let (prev, curr) = (&pair[0], &pair[1]);
        let value = match component {
            Component::Intraday => (curr.close - curr.open) / curr.open,
            Component::Overnight => (curr.open - prev.close) / prev.close,
            Component::Daily => (curr.close - prev.close) / prev.close,
        };
        dates.push(curr.date);
        values.push(value);
    }
    ReturnSeries::new(component, dates, values)
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub(crate) fn sample_std(values: &[f64]) -> f64 {
    let m = mean(values);
    let ss = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>();
    (ss / (values.len() - 1) as f64).sqrt()
}

/// Sample mean and standard deviation (n-1 denominator).
pub fn summary_stats(series: &ReturnSeries) -> Result<ReturnStats> {
    if series.len() < 2 {
        return Err(Error::validation(format!(
            "need at least 2 observations for summary statistics, got {}",
            series.len()
        )));
    }
    Ok(ReturnStats {
        mean: mean(&series.values),
        std: sample_std(&series.values),
        n: series.len(),
    })
}

fn check_same_grid(
    a_component: Component,
    b_component: Component,
    a_dates: &[NaiveDate],
    b_dates: &[NaiveDate],
) -> Result<()> {
    if a_component != b_component {
        return Err(Error::validation(format!(
            "component mismatch: {a_component} vs {b_component}"
        )));
    }
    if a_dates != b_dates {
        return Err(Error::validation(
            "series are not on the same dates; align the price series first",
        ));
    }
    Ok(())
}

/// Pearson correlation of two return series on the same dates.
pub fn correlation(a: &ReturnSeries, b: &ReturnSeries) -> Result<f64> {
    check_same_grid(a.component, b.component, &a.dates, &b.dates)?;
    if a.len() < 2 {
        return Err(Error::validation(
            "need at least 2 observations for a correlation",
        ));
    }
    let (ma, mb) = (mean(&a.values), mean(&b.values));
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (x, y) in a.values.iter().zip(&b.values) {
        let (dx, dy) = (x - ma, y - mb);
        cov += dx * dy;
        var_a += dx * dx;
        var_b += dy * dy;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(Error::validation(
            "correlation is undefined for a constant series",
        ));
    }
    Ok(cov / (var_a.sqrt() * var_b.sqrt()))
}

/// Elementwise return spread: first leg minus second leg.
pub fn spread(adr: &ReturnSeries, spy: &ReturnSeries) -> Result<SpreadSeries> {
    check_same_grid(adr.component, spy.component, &adr.dates, &spy.dates)?;
    let values = adr
        .values
        .iter()
        .zip(&spy.values)
        .map(|(a, b)| a - b)
        .collect();
    SpreadSeries::new(adr.component, adr.dates.clone(), values)
}

/// Per-day overnight share of squared daily variability, q = R_ON^2 /
/// (R_ID^2 + R_ON^2), excluding days where both legs are exactly zero.
pub fn q_diagnostics(on: &ReturnSeries, id: &ReturnSeries, bins: usize) -> Result<QDiagnostics> {
    if on.component != Component::Overnight || id.component != Component::Intraday {
        return Err(Error::validation(
            "q-ratio needs an overnight series and an intraday series, in that order",
        ));
    }
    if on.dates != id.dates {
        return Err(Error::validation("overnight/intraday dates differ"));
    }
    if bins == 0 {
        return Err(Error::validation("histogram needs at least 1 bin"));
    }

    let mut dates = Vec::new();
    let mut q_values = Vec::new();
    let mut excluded_days = 0;
    for ((&r_on, &r_id), &date) in on.values.iter().zip(&id.values).zip(&on.dates) {
        let denom = r_on * r_on + r_id * r_id;
        if denom > 0.0 {
            dates.push(date);
            q_values.push(r_on * r_on / denom);
        } else {
            excluded_days += 1;
        }
    }

    let q_bar = if q_values.is_empty() {
        None
    } else {
        Some(mean(&q_values))
    };

    let mut counts = vec![0usize; bins];
    for &q in &q_values {
        // Right-closed last bin: q = 1 lands in bin bins-1.
        let idx = ((q * bins as f64) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let edges = (0..=bins).map(|j| j as f64 / bins as f64).collect();

    Ok(QDiagnostics {
        dates,
        q_values,
        q_bar,
        excluded_days,
        histogram: Histogram { edges, counts },
    })
}

/// Standard-normal quantile function.
pub(crate) fn normal_quantile(p: f64) -> f64 {
    let standard = Normal::new(0.0, 1.0).expect("standard normal is valid");
    standard.inverse_cdf(p)
}

/// QQ data against the standard normal: the k-th order statistic of the
/// standardized sample is paired with the normal quantile at plotting
/// position (k - 0.5)/n.
pub fn qq_data(series: &ReturnSeries) -> Result<QQData> {
    let n = series.len();
    if n < 3 {
        return Err(Error::validation(format!(
            "need at least 3 observations for a QQ plot, got {n}"
        )));
    }
    let m = mean(&series.values);
    let s = sample_std(&series.values);
    if s == 0.0 {
        return Err(Error::validation(
            "QQ plot is undefined for a constant series",
        ));
    }

    let mut standardized: Vec<f64> = series.values.iter().map(|v| (v - m) / s).collect();
    standardized.sort_by(|a, b| a.partial_cmp(b).expect("finite returns"));

    let points = standardized
        .into_iter()
        .enumerate()
        .map(|(k, emp)| {
            let p = (k as f64 + 0.5) / n as f64;
            (normal_quantile(p), emp)
        })
        .collect();
    Ok(QQData { points })
}
