//! Ornstein-Uhlenbeck modeling of return spreads.
//!
//! The spread is modeled as dX = mu (theta - X) dt + sigma dW. Sampled
//! every `dt` days, the process is a Gaussian AR(1): conditioned on
//! x(i-1),
//!
//!   x(i) ~ N( x(i-1) e^{-mu dt} + theta (1 - e^{-mu dt}),  sigma_tilde^2 )
//!   sigma_tilde^2 = sigma^2 (1 - e^{-2 mu dt}) / (2 mu)
//!
//! Fitting maximizes the average per-transition log-density
//!
//!   l = -ln(2 pi)/2 - ln sigma_tilde
//!       - (1 / 2 n sigma_tilde^2) sum_i [x(i) - x(i-1) e^{-mu dt}
//!                                        - theta (1 - e^{-mu dt})]^2
//!
//! conditioning on the first observation (no stationary-density term).
//! The unconstrained maximizer is the closed-form AR(1) regression of
//! x(i) on x(i-1); a Nelder-Mead polish over (theta, ln mu, ln sigma)
//! guards the positivity boundary and certifies the optimum with a
//! finite-difference gradient check. An AR(1) slope outside (0, 1) means
//! the sample carries no mean reversion; that is reported as
//! non-convergence rather than silently clamped.

use chrono::{Datelike, NaiveDate};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::returns::{Component, SpreadSeries};

/// Minimum observations for a per-calendar-year fit; below this the
/// dispersion of the mean-reversion rate makes year-over-year
/// comparisons meaningless.
pub const MIN_YEARLY_OBS: usize = 30;

/// Gradient bound (per coordinate, central differences) certifying a fit
/// as converged.
pub const GRADIENT_TOL: f64 = 1e-4;

const LN_2PI: f64 = 1.8378770664093453;

/// Ornstein-Uhlenbeck parameters: long-term mean `theta` (return
/// units), mean-reversion rate `mu` (per day, > 0), volatility `sigma`
/// (per square-root day, > 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OuParams {
    pub theta: f64,
    pub mu: f64,
    pub sigma: f64,
}

impl OuParams {
    pub fn new(theta: f64, mu: f64, sigma: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::validation(format!(
                "theta must be finite, got {theta}"
            )));
        }
        if mu <= 0.0 || !mu.is_finite() {
            return Err(Error::validation(format!(
                "mean-reversion rate mu must be positive and finite, got {mu}"
            )));
        }
        if sigma <= 0.0 || !sigma.is_finite() {
            return Err(Error::validation(format!(
                "volatility sigma must be positive and finite, got {sigma}"
            )));
        }
        Ok(OuParams { theta, mu, sigma })
    }
}

/// One-step Gaussian transition of the discretely observed process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    /// e^{-mu dt}: weight of the previous observation.
    pub mean_coeff: f64,
    /// theta (1 - e^{-mu dt}): pull toward the long-term mean.
    pub intercept: f64,
    /// sigma_tilde^2: exact conditional variance over one step.
    pub variance: f64,
}

/// Conditional mean coefficient, intercept, and variance of the exact
/// one-step transition. Stable for mu -> 0, where the variance tends to
/// sigma^2 dt.
pub fn transition_params(params: &OuParams, dt: f64) -> Transition {
    debug_assert!(dt > 0.0);
    let mean_coeff = (-params.mu * dt).exp();
    let intercept = params.theta * (1.0 - mean_coeff);
    // 1 - e^{-2 mu dt} via expm1 to keep precision when mu dt is tiny.
    let variance =
        params.sigma * params.sigma * (-(-2.0 * params.mu * dt).exp_m1()) / (2.0 * params.mu);
    Transition {
        mean_coeff,
        intercept,
        variance,
    }
}

pub(crate) fn avg_log_likelihood_values(params: &OuParams, values: &[f64], dt: f64) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::validation(format!(
            "need at least 2 observations for a likelihood, got {}",
            values.len()
        )));
    }
    let t = transition_params(params, dt);
    let n = (values.len() - 1) as f64;
    let mut ssr = 0.0;
    for pair in values.windows(2) {
        let residual = pair[1] - pair[0] * t.mean_coeff - t.intercept;
        ssr += residual * residual;
    }
    let ll = -0.5 * LN_2PI - 0.5 * t.variance.ln() - ssr / (2.0 * n * t.variance);
    if !ll.is_finite() {
        return Err(Error::Evaluation(format!(
            "log-likelihood is not finite for theta={}, mu={}, sigma={}",
            params.theta, params.mu, params.sigma
        )));
    }
    Ok(ll)
}

/// Average per-transition log-likelihood of the spread under `params`.
pub fn avg_log_likelihood(params: &OuParams, x: &SpreadSeries, dt: f64) -> Result<f64> {
    avg_log_likelihood_values(params, &x.values, dt)
}

/// Date window and sample size of a fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitWindow {
    pub start: NaiveDate,
    pub end: NaiveDate,
    /// Number of observations (the fit uses n - 1 transitions).
    pub n: usize,
}

/// Outcome of a maximum-likelihood fit.
///
/// `params` is `None` when the sample shows no mean reversion (AR(1)
/// slope outside (0, 1)); `ar1_slope` is kept as the diagnostic either
/// way.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params: Option<OuParams>,
    pub avg_log_likelihood: Option<f64>,
    pub window: FitWindow,
    pub dt: f64,
    pub converged: bool,
    pub ar1_slope: f64,
}

impl Serialize for FitResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("FitResult", 9)?;
        s.serialize_field("theta", &self.params.map(|p| p.theta))?;
        s.serialize_field("mu", &self.params.map(|p| p.mu))?;
        s.serialize_field("sigma", &self.params.map(|p| p.sigma))?;
        s.serialize_field("avg_ll", &self.avg_log_likelihood)?;
        s.serialize_field("n", &self.window.n)?;
        s.serialize_field("start", &self.window.start)?;
        s.serialize_field("end", &self.window.end)?;
        s.serialize_field("dt", &self.dt)?;
        s.serialize_field("converged", &self.converged)?;
        s.end()
    }
}

struct Ar1Fit {
    intercept: f64,
    slope: f64,
    /// Residual sum of squares of x(i) on x(i-1).
    rss: f64,
}

fn ar1_ols(values: &[f64]) -> Ar1Fit {
    let n = values.len() - 1;
    let lagged = &values[..n];
    let current = &values[1..];
    let mean_lag = lagged.iter().sum::<f64>() / n as f64;
    let mean_cur = current.iter().sum::<f64>() / n as f64;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (x, y) in lagged.iter().zip(current) {
        cov += (x - mean_lag) * (y - mean_cur);
        var += (x - mean_lag) * (x - mean_lag);
    }
    let slope = cov / var;
    let intercept = mean_cur - slope * mean_lag;
    let rss = lagged
        .iter()
        .zip(current)
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    Ar1Fit {
        intercept,
        slope,
        rss,
    }
}

/// Central finite-difference gradient of the average log-likelihood in
/// (theta, mu, sigma), with per-coordinate relative step 1e-6.
pub fn likelihood_gradient(params: &OuParams, x: &SpreadSeries, dt: f64) -> Result<[f64; 3]> {
    gradient_values(params, &x.values, dt)
}

fn gradient_values(params: &OuParams, values: &[f64], dt: f64) -> Result<[f64; 3]> {
    let base = [params.theta, params.mu, params.sigma];
    let mut grad = [0.0; 3];
    for (i, g) in grad.iter_mut().enumerate() {
        let mut h = 1e-6 * base[i].abs().max(1e-3);
        if i > 0 {
            // mu and sigma must stay positive at the probe points.
            h = h.min(base[i] * 0.5);
        }
        let mut up = base;
        let mut down = base;
        up[i] += h;
        down[i] -= h;
        let p_up = OuParams::new(up[0], up[1], up[2])?;
        let p_down = OuParams::new(down[0], down[1], down[2])?;
        let f_up = avg_log_likelihood_values(&p_up, values, dt)?;
        let f_down = avg_log_likelihood_values(&p_down, values, dt)?;
        *g = (f_up - f_down) / (2.0 * h);
    }
    Ok(grad)
}

/// Nelder-Mead maximization over (theta, ln mu, ln sigma). Returns the
/// best vertex visited.
fn nelder_mead<F: Fn(&[f64; 3]) -> f64>(f: F, start: [f64; 3], max_iter: usize) -> [f64; 3] {
    let steps = [start[0].abs().max(1e-3) * 0.05, 0.05, 0.05];
    let mut simplex: Vec<([f64; 3], f64)> = Vec::with_capacity(4);
    simplex.push((start, f(&start)));
    for i in 0..3 {
        let mut v = start;
        v[i] += steps[i];
        simplex.push((v, f(&v)));
    }

    for _ in 0..max_iter {
        // Descending by objective: best first (maximization).
        simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
        let spread = simplex[0].1 - simplex[3].1;
        if spread.abs() < 1e-13 {
            break;
        }
        let centroid = {
            let mut c = [0.0; 3];
            for (v, _) in &simplex[..3] {
                for i in 0..3 {
                    c[i] += v[i] / 3.0;
                }
            }
            c
        };
        let worst = simplex[3];
        let reflect = |scale: f64| {
            let mut v = [0.0; 3];
            for i in 0..3 {
                v[i] = centroid[i] + scale * (centroid[i] - worst.0[i]);
            }
            v
        };

        let r = reflect(1.0);
        let fr = f(&r);
        if fr > simplex[0].1 {
            let e = reflect(2.0);
            let fe = f(&e);
            simplex[3] = if fe > fr { (e, fe) } else { (r, fr) };
        } else if fr > simplex[2].1 {
            simplex[3] = (r, fr);
        } else {
            let c = reflect(-0.5);
            let fc = f(&c);
            if fc > worst.1 {
                simplex[3] = (c, fc);
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].0;
                for entry in simplex.iter_mut().skip(1) {
                    for i in 0..3 {
                        entry.0[i] = best[i] + 0.5 * (entry.0[i] - best[i]);
                    }
                    entry.1 = f(&entry.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    simplex[0].0
}

/// Maximum-likelihood fit of the spread.
///
/// The AR(1) regression of x(i) on x(i-1) supplies the initializer
/// (and is the exact unconstrained maximizer); Nelder-Mead refinement in
/// (theta, ln mu, ln sigma) keeps mu, sigma positive. A sample whose
/// AR(1) slope falls outside (0, 1) is reported with `converged = false`
/// and no parameters.
pub fn fit_mle(x: &SpreadSeries, dt: f64) -> Result<FitResult> {
    let values = &x.values;
    if values.len() < 4 {
        return Err(Error::validation(format!(
            "need at least 4 observations to fit, got {}",
            values.len()
        )));
    }
    if values.iter().all(|v| *v == values[0]) {
        return Err(Error::validation("cannot fit a constant spread"));
    }
    let window = FitWindow {
        start: x.dates[0],
        end: x.dates[x.dates.len() - 1],
        n: values.len(),
    };

    let ar1 = ar1_ols(values);
    if !ar1.slope.is_finite() || ar1.slope <= 0.0 || ar1.slope >= 1.0 {
        return Ok(FitResult {
            params: None,
            avg_log_likelihood: None,
            window,
            dt,
            converged: false,
            ar1_slope: ar1.slope,
        });
    }
    let n = (values.len() - 1) as f64;
    let var_tilde = ar1.rss / n;
    let sample_var = crate::returns::sample_std(values).powi(2);
    if var_tilde <= 0.0 || var_tilde <= 1e-24 * sample_var {
        return Err(Error::validation(
            "spread lies on an AR(1) line to machine precision; likelihood is unbounded",
        ));
    }

    let mu0 = -ar1.slope.ln() / dt;
    let theta0 = ar1.intercept / (1.0 - ar1.slope);
    let sigma0 = (var_tilde * 2.0 * mu0 / (1.0 - ar1.slope * ar1.slope)).sqrt();

    let objective = |v: &[f64; 3]| -> f64 {
        let params = OuParams {
            theta: v[0],
            mu: v[1].exp(),
            sigma: v[2].exp(),
        };
        avg_log_likelihood_values(&params, values, dt).unwrap_or(f64::NEG_INFINITY)
    };
    let start = [theta0, mu0.ln(), sigma0.ln()];
    let polished = nelder_mead(objective, start, 400);

    let candidates = [start, polished];
    let (best, best_ll) = candidates
        .iter()
        .map(|v| (*v, objective(v)))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
        .expect("two candidates");
    if !best_ll.is_finite() {
        return Err(Error::Evaluation(
            "likelihood is not finite at the fitted parameters".to_string(),
        ));
    }
    let params = OuParams::new(best[0], best[1].exp(), best[2].exp())?;
    let grad = gradient_values(&params, values, dt)?;
    let converged = grad.iter().all(|g| g.abs() <= GRADIENT_TOL);

    Ok(FitResult {
        params: Some(params),
        avg_log_likelihood: Some(best_ll),
        window,
        dt,
        converged,
        ar1_slope: ar1.slope,
    })
}

/// Epoch for the synthetic dates attached to simulated spreads.
const SIM_EPOCH: (i32, u32, u32) = (2000, 1, 1);

/// Simulate `steps` exact transitions from `x0` with a seeded generator.
/// Output holds `steps + 1` values (the initial one first) on synthetic
/// consecutive dates. The same seed always reproduces the same path; a
/// zero conditional variance (sigma underflow) takes the noiseless
/// deterministic-decay path.
pub fn simulate(params: &OuParams, x0: f64, steps: usize, dt: f64, seed: u64) -> SpreadSeries {
    let t = transition_params(params, dt);
    let sigma_tilde = t.variance.sqrt();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);

    let mut values = Vec::with_capacity(steps + 1);
    values.push(x0);
    let mut x = x0;
    for _ in 0..steps {
        x = t.mean_coeff * x + t.intercept;
        if sigma_tilde > 0.0 {
            let z: f64 = rng.sample(StandardNormal);
            x += sigma_tilde * z;
        }
        values.push(x);
    }

    let epoch =
        NaiveDate::from_ymd_opt(SIM_EPOCH.0, SIM_EPOCH.1, SIM_EPOCH.2).expect("valid epoch");
    let dates = (0..values.len())
        .map(|i| epoch + chrono::Days::new(i as u64))
        .collect();
    SpreadSeries::new(Component::Daily, dates, values).expect("simulated spread is well-formed")
}

/// A calendar year skipped by [`fit_yearly`] and why.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedYear {
    pub year: i32,
    pub n_obs: usize,
    pub reason: String,
}

/// Per-calendar-year fits plus the skipped partitions.
#[derive(Debug, Clone, PartialEq)]
pub struct YearlyFits {
    pub fits: Vec<(i32, FitResult)>,
    pub skipped: Vec<SkippedYear>,
}

/// Partition the spread by the calendar year of each observation's date
/// (a Jan 1 observation belongs to the new year) and fit every partition
/// with at least [`MIN_YEARLY_OBS`] observations.
pub fn fit_yearly(x: &SpreadSeries, dt: f64) -> Result<YearlyFits> {
    let mut fits = Vec::new();
    let mut skipped = Vec::new();

    let mut start = 0;
    while start < x.len() {
        let year = x.dates[start].year();
        let mut end = start;
        while end < x.len() && x.dates[end].year() == year {
            end += 1;
        }
        let n_obs = end - start;
        if n_obs < MIN_YEARLY_OBS {
            skipped.push(SkippedYear {
                year,
                n_obs,
                reason: format!("fewer than {MIN_YEARLY_OBS} observations"),
            });
        } else {
            let part = SpreadSeries::new(
                x.component,
                x.dates[start..end].to_vec(),
                x.values[start..end].to_vec(),
            )?;
            match fit_mle(&part, dt) {
                Ok(fit) => fits.push((year, fit)),
                Err(Error::Validation(msg)) => skipped.push(SkippedYear {
                    year,
                    n_obs,
                    reason: msg,
                }),
                Err(other) => return Err(other),
            }
        }
        start = end;
    }

    if fits.is_empty() {
        return Err(Error::validation(
            "no calendar-year partition has enough observations to fit",
        ));
    }
    Ok(YearlyFits { fits, skipped })
}

/// Simulate a path of the same sample size as `fit`'s window from its
/// fitted parameters (starting at the long-term mean) and re-estimate.
/// Validates estimator behavior on data that truly follows the model.
pub fn simulate_refit(fit: &FitResult, seed: u64) -> Result<FitResult> {
    if !fit.converged {
        return Err(Error::validation(
            "simulate_refit needs a converged fit as its starting point",
        ));
    }
    let params = fit
        .params
        .ok_or_else(|| Error::validation("converged fit is missing parameters"))?;
    let steps = fit.window.n - 1;
    let path = simulate(&params, params.theta, steps, fit.dt, seed);
    fit_mle(&path, fit.dt)
}
