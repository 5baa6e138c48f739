//! Command implementations: wire library calls to files on disk.

use std::path::{Path, PathBuf};

use pairstat::backtest::{grid_run, run_strategy, StrategyConfig};
use pairstat::market_data::{adjust, align, fetch_csv, parse_csv, to_csv_string, PriceSeries};
use pairstat::ou::{fit_mle, fit_yearly, simulate, simulate_refit, FitResult, OuParams};
use pairstat::report::{
    self, fit_csv, q_histogram_csv, q_series_csv, qq_csv, scatter_csv, spread_csv, to_json_pretty,
    trades_csv, FitRecord, FitSource,
};
use pairstat::returns::{compute_returns, q_diagnostics, qq_data, spread, Component};

use crate::manifest::RunManifest;
use crate::{Cli, CliError, Command, SchemaArgs};

pub(crate) fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Stats {
            prices,
            bins,
            ticker,
            schema,
        } => cmd_stats(cli, prices, *bins, ticker, schema),
        Command::Qratio {
            prices,
            bins,
            ticker,
            schema,
        } => cmd_qratio(cli, prices, *bins, ticker, schema),
        Command::Qq {
            prices,
            component,
            ticker,
            schema,
        } => cmd_qq(cli, prices, *component, ticker, schema),
        Command::Fit {
            adr,
            spy,
            component,
            yearly,
            refit,
            dt,
            schema,
        } => cmd_fit(cli, adr, spy, *component, *yearly, *refit, *dt, schema),
        Command::Simulate {
            theta,
            mu,
            sigma,
            x0,
            steps,
            dt,
        } => cmd_simulate(cli, *theta, *mu, *sigma, *x0, *steps, *dt),
        Command::Backtest {
            adr,
            spy,
            k,
            duration,
            notional,
            component,
            schema,
        } => cmd_backtest(cli, adr, spy, *k, *duration, *notional, *component, schema),
        Command::Grid {
            adr,
            spy,
            ks,
            durations,
            notional,
            component,
            schema,
        } => cmd_grid(cli, adr, spy, ks, durations, *notional, *component, schema),
        Command::Fetch {
            ticker,
            url_template,
            start,
            end,
            schema,
        } => cmd_fetch(cli, ticker, url_template.as_deref(), *start, *end, schema),
    }
}

fn ticker_label(path: &Path, explicit: &Option<String>) -> String {
    explicit.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "SERIES".to_string())
    })
}

/// Parse and adjust one price file.
fn load_series(
    path: &Path,
    schema: &SchemaArgs,
    ticker: &Option<String>,
) -> Result<PriceSeries, CliError> {
    let label = ticker_label(path, ticker);
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::Input(format!("cannot open {}: {e}", path.display())))?;
    let series = parse_csv(file, &schema.to_schema(), &label)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(adjust(&series))
}

fn schema_json(schema: &SchemaArgs) -> serde_json::Value {
    serde_json::json!({
        "date_col": schema.date_col,
        "open_col": schema.open_col,
        "close_col": schema.close_col,
        "adj_close_col": schema.adj_close_col,
        "adj_factor_col": schema.adj_factor_col,
        "no_adjust": schema.no_adjust,
    })
}

fn write_out(dir: &Path, name: &str, content: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(&path, content)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn start_run(
    cli: &Cli,
    command: &str,
    inputs: Vec<String>,
    params: serde_json::Value,
) -> Result<PathBuf, CliError> {
    let manifest = RunManifest::new(command, inputs, params, cli.seed, &cli.out);
    let dir = manifest.prepare_run_dir()?;
    println!("run directory: {}", dir.display());
    Ok(dir)
}

fn cmd_stats(
    cli: &Cli,
    prices: &Path,
    bins: usize,
    ticker: &Option<String>,
    schema: &SchemaArgs,
) -> Result<(), CliError> {
    let series = load_series(prices, schema, ticker)?;
    let (stats, q) = report::stats_report(&series, bins)?;

    let dir = start_run(
        cli,
        "stats",
        vec![prices.display().to_string()],
        serde_json::json!({
            "bins": bins,
            "ticker": series.ticker(),
            "format": format!("{:?}", cli.format),
            "schema": schema_json(schema),
        }),
    )?;
    if cli.format.json() {
        write_out(&dir, "stats.json", &to_json_pretty(&stats))?;
        write_out(&dir, "qratio.json", &to_json_pretty(&q))?;
    }
    if cli.format.csv() {
        write_out(&dir, "stats.csv", &report::stats_csv(&stats))?;
        write_out(&dir, "q_hist.csv", &q_histogram_csv(&q))?;
    }

    let q_bar = stats
        .q_bar
        .map(|v| format!("{v:.4}"))
        .unwrap_or_else(|| "undefined".to_string());
    println!(
        "{}: n={} | on mean={:.6} std={:.6} | id mean={:.6} std={:.6} | dd mean={:.6} std={:.6} | q_bar={} (excluded {})",
        stats.ticker,
        stats.n,
        stats.overnight.mean,
        stats.overnight.std,
        stats.intraday.mean,
        stats.intraday.std,
        stats.daily.mean,
        stats.daily.std,
        q_bar,
        stats.excluded_days,
    );
    Ok(())
}

fn cmd_qratio(
    cli: &Cli,
    prices: &Path,
    bins: usize,
    ticker: &Option<String>,
    schema: &SchemaArgs,
) -> Result<(), CliError> {
    let series = load_series(prices, schema, ticker)?;
    let on = compute_returns(&series, Component::Overnight)?;
    let id = compute_returns(&series, Component::Intraday)?;
    let q = q_diagnostics(&on, &id, bins)?;

    let dir = start_run(
        cli,
        "qratio",
        vec![prices.display().to_string()],
        serde_json::json!({
            "bins": bins,
            "ticker": series.ticker(),
            "format": format!("{:?}", cli.format),
            "schema": schema_json(schema),
        }),
    )?;
    if cli.format.json() {
        write_out(&dir, "qratio.json", &to_json_pretty(&q))?;
    }
    if cli.format.csv() {
        write_out(&dir, "q_hist.csv", &q_histogram_csv(&q))?;
        write_out(&dir, "q_series.csv", &q_series_csv(&q))?;
    }
    match q.q_bar {
        Some(q_bar) => println!(
            "{}: q_bar={q_bar:.4} over {} days ({} excluded)",
            series.ticker(),
            q.q_values.len(),
            q.excluded_days
        ),
        None => println!(
            "{}: q undefined on all {} days",
            series.ticker(),
            q.excluded_days
        ),
    }
    Ok(())
}

fn cmd_qq(
    cli: &Cli,
    prices: &Path,
    component: Component,
    ticker: &Option<String>,
    schema: &SchemaArgs,
) -> Result<(), CliError> {
    let series = load_series(prices, schema, ticker)?;
    let returns = compute_returns(&series, component)?;
    let qq = qq_data(&returns)?;

    let dir = start_run(
        cli,
        "qq",
        vec![prices.display().to_string()],
        serde_json::json!({
            "component": component.code(),
            "ticker": series.ticker(),
            "format": format!("{:?}", cli.format),
            "schema": schema_json(schema),
        }),
    )?;
    if cli.format.json() {
        write_out(&dir, "qq.json", &to_json_pretty(&qq))?;
    }
    if cli.format.csv() {
        write_out(&dir, "qq.csv", &qq_csv(&qq))?;
    }
    println!(
        "{}: {} QQ points for component {}",
        series.ticker(),
        qq.points.len(),
        component
    );
    Ok(())
}

fn warn_not_converged(label: &str, fit: &FitResult) {
    if !fit.converged {
        eprintln!(
            "warning: {label}: no mean reversion detected (AR(1) slope {:.6}); reported as non-converged",
            fit.ar1_slope
        );
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_fit(
    cli: &Cli,
    adr: &Path,
    spy: &Path,
    component: Component,
    yearly: bool,
    refit: bool,
    dt: f64,
    schema: &SchemaArgs,
) -> Result<(), CliError> {
    let left = load_series(adr, schema, &None)?;
    let right = load_series(spy, schema, &None)?;
    let pair = align(&left, &right)?;
    let x = spread(
        &compute_returns(pair.left(), component)?,
        &compute_returns(pair.right(), component)?,
    )?;

    let mut empirical: Vec<FitRecord> = Vec::new();
    let mut simulated: Vec<FitRecord> = Vec::new();
    if yearly {
        let fits = fit_yearly(&x, dt)?;
        for skip in &fits.skipped {
            eprintln!(
                "warning: year {}: skipped ({} observations): {}",
                skip.year, skip.n_obs, skip.reason
            );
        }
        for (index, (year, fit)) in fits.fits.iter().enumerate() {
            warn_not_converged(&format!("year {year}"), fit);
            if refit {
                if fit.converged {
                    let re = simulate_refit(fit, cli.seed + index as u64)?;
                    simulated.push(FitRecord::new(
                        re,
                        component,
                        FitSource::Simulated,
                        Some(*year),
                    ));
                } else {
                    eprintln!("warning: year {year}: refit skipped (fit did not converge)");
                }
            }
            empirical.push(FitRecord::new(
                fit.clone(),
                component,
                FitSource::Empirical,
                Some(*year),
            ));
        }
    } else {
        let fit = fit_mle(&x, dt)?;
        warn_not_converged("full window", &fit);
        if refit {
            if fit.converged {
                let re = simulate_refit(&fit, cli.seed)?;
                simulated.push(FitRecord::new(re, component, FitSource::Simulated, None));
            } else {
                eprintln!("warning: refit skipped (fit did not converge)");
            }
        }
        empirical.push(FitRecord::new(fit, component, FitSource::Empirical, None));
    }
    let mut records = empirical;
    records.extend(simulated);

    let dir = start_run(
        cli,
        "fit",
        vec![adr.display().to_string(), spy.display().to_string()],
        serde_json::json!({
            "component": component.code(),
            "yearly": yearly,
            "refit": refit,
            "dt": dt,
            "format": format!("{:?}", cli.format),
            "schema": schema_json(schema),
        }),
    )?;
    if cli.format.json() {
        write_out(&dir, "fit.json", &to_json_pretty(&records))?;
    }
    if cli.format.csv() {
        write_out(&dir, "fit.csv", &fit_csv(&records))?;
    }

    for record in &records {
        let year = record
            .year
            .map(|y| y.to_string())
            .unwrap_or_else(|| "all".to_string());
        match record.fit.params {
            Some(p) => println!(
                "{year} {} {}: theta={:+.5} sigma={:.4} mu={:.4} avg_ll={:.4} (n={}, converged={})",
                record.component,
                record.source,
                p.theta,
                p.sigma,
                p.mu,
                record.fit.avg_log_likelihood.unwrap_or(f64::NAN),
                record.fit.window.n,
                record.fit.converged,
            ),
            None => println!(
                "{year} {} {}: non-converged (AR(1) slope {:.6}, n={})",
                record.component, record.source, record.fit.ar1_slope, record.fit.window.n,
            ),
        }
    }
    Ok(())
}

fn cmd_simulate(
    cli: &Cli,
    theta: f64,
    mu: f64,
    sigma: f64,
    x0: Option<f64>,
    steps: usize,
    dt: f64,
) -> Result<(), CliError> {
    let params = OuParams::new(theta, mu, sigma)?;
    let x0 = x0.unwrap_or(params.theta);
    let path = simulate(&params, x0, steps, dt, cli.seed);

    let dir = start_run(
        cli,
        "simulate",
        Vec::new(),
        serde_json::json!({
            "theta": theta,
            "mu": mu,
            "sigma": sigma,
            "x0": x0,
            "steps": steps,
            "dt": dt,
            "format": format!("{:?}", cli.format),
        }),
    )?;
    if cli.format.json() {
        let sim = serde_json::json!({
            "params": params,
            "x0": x0,
            "steps": steps,
            "dt": dt,
            "seed": cli.seed,
            "values": path.values,
        });
        write_out(&dir, "sim.json", &to_json_pretty(&sim))?;
    }
    if cli.format.csv() {
        write_out(&dir, "path.csv", &spread_csv(&path))?;
    }
    println!(
        "simulated {} observations (x0={x0}, seed={})",
        path.len(),
        cli.seed
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_backtest(
    cli: &Cli,
    adr: &Path,
    spy: &Path,
    k: f64,
    duration: usize,
    notional: f64,
    component: Component,
    schema: &SchemaArgs,
) -> Result<(), CliError> {
    let pair = align(
        &load_series(adr, schema, &None)?,
        &load_series(spy, schema, &None)?,
    )?;
    let config = StrategyConfig {
        entry_threshold: k,
        duration,
        notional_per_leg: notional,
        signal_component: component,
    };
    let report = run_strategy(&pair, &config)?;

    let dir = start_run(
        cli,
        "backtest",
        vec![adr.display().to_string(), spy.display().to_string()],
        serde_json::json!({
            "k": k,
            "duration": duration,
            "notional": notional,
            "component": component.code(),
            "format": format!("{:?}", cli.format),
            "schema": schema_json(schema),
        }),
    )?;
    if cli.format.json() {
        write_out(&dir, "report.json", &report::backtest_json(&report))?;
    }
    if cli.format.csv() {
        write_out(&dir, "trades.csv", &trades_csv(&report.trades))?;
    }
    match (report.annual_return, report.per_trade_return) {
        (Some(annual), Some(per_trade)) => println!(
            "{} trades, total ${:.4}, annual ${annual:.4}, per-trade ${per_trade:.4}",
            report.n_trades, report.total_profit
        ),
        _ => println!("no trades executed"),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_grid(
    cli: &Cli,
    adr: &Path,
    spy: &Path,
    ks: &[f64],
    durations: &[usize],
    notional: f64,
    component: Component,
    schema: &SchemaArgs,
) -> Result<(), CliError> {
    let pair = align(
        &load_series(adr, schema, &None)?,
        &load_series(spy, schema, &None)?,
    )?;
    let base = StrategyConfig {
        notional_per_leg: notional,
        signal_component: component,
        ..StrategyConfig::default()
    };
    let grid = grid_run(&pair, ks, durations, &base)?;

    let dir = start_run(
        cli,
        "grid",
        vec![adr.display().to_string(), spy.display().to_string()],
        serde_json::json!({
            "ks": ks,
            "durations": durations,
            "notional": notional,
            "component": component.code(),
            "format": format!("{:?}", cli.format),
            "schema": schema_json(schema),
        }),
    )?;
    if cli.format.csv() {
        write_out(&dir, "scatter.csv", &scatter_csv(&grid.scatter))?;
    }
    if cli.format.json() {
        for report in &grid.reports {
            let name = format!(
                "cells/cell-k{}-n{}.json",
                report.config.entry_threshold, report.config.duration
            );
            write_out(&dir, &name, &report::backtest_json(report))?;
        }
    }
    println!(
        "{} cells ({} thresholds x {} durations)",
        grid.reports.len(),
        ks.len(),
        durations.len()
    );
    for report in &grid.reports {
        println!(
            "k={:+.4} N={}: trades={} total=${:.4}",
            report.config.entry_threshold,
            report.config.duration,
            report.n_trades,
            report.total_profit
        );
    }
    Ok(())
}

fn cmd_fetch(
    cli: &Cli,
    ticker: &str,
    url_template: Option<&str>,
    start: chrono::NaiveDate,
    end: chrono::NaiveDate,
    schema: &SchemaArgs,
) -> Result<(), CliError> {
    let template = match url_template {
        Some(t) => t.to_string(),
        None => std::env::var("PAIRSTAT_FETCH_URL").map_err(|_| {
            CliError::Usage(
                "no URL template: pass --url-template or set PAIRSTAT_FETCH_URL".to_string(),
            )
        })?,
    };
    if start > end {
        return Err(CliError::Usage(format!("start {start} is after end {end}")));
    }
    let series = fetch_csv(&template, ticker, (start, end), &schema.to_schema())?;

    let dir = start_run(
        cli,
        "fetch",
        vec![template.clone()],
        serde_json::json!({
            "ticker": ticker,
            "start": start,
            "end": end,
            "schema": schema_json(schema),
        }),
    )?;
    write_out(&dir, "prices.csv", &to_csv_string(&series))?;
    println!(
        "fetched {} bars for {} ({}..{})",
        series.len(),
        ticker,
        series.first_date(),
        series.last_date()
    );
    Ok(())
}
