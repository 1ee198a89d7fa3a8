//! ARIMA(p,d,q) estimation by conditional sum of squares, plus the
//! correlogram tools (ACF/PACF) used to pick orders by hand and an automatic
//! order search.
//!
//! Estimation differences the series `d` times, subtracts the mean when
//! `d == 0`, and minimizes the conditional sum of squares
//!
//! ```text
//! e_t = w_t − Σ φ_i w_{t−i} − Σ θ_j e_{t−j}
//! ```
//!
//! with pre-sample values treated as zero. The optimizer works in a
//! transformed coordinate space (tanh per coordinate, then the
//! partial-correlation recursion) so every candidate is stationary and
//! invertible; Nelder-Mead runs from a handful of fixed starts plus a
//! Hannan-Rissanen two-stage regression start when one is available, and the
//! best conditional sum of squares wins. Model quality is compared with the
//! small-sample corrected AIC over `k = p + q + 1` parameters.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::forecast::ForecastResult;
use crate::optim::{nelder_mead, solve_linear};
use crate::series::{MonthStamp, TimeSeries};

#[derive(Debug, Error, PartialEq)]
pub enum ArimaError {
    #[error("series too short for ARIMA{order}: {len} points after differencing, need {min}")]
    TooShort {
        order: ArimaOrder,
        len: usize,
        min: usize,
    },
    #[error("cannot take {d} differences of {len} points")]
    CannotDifference { len: usize, d: usize },
    #[error("series too short for the requested correlogram: {len} points, need {min}")]
    AcfTooShort { len: usize, min: usize },
    #[error("series has zero variance; correlogram is undefined")]
    Degenerate,
    #[error("partial autocorrelation recursion broke down at lag {lag}")]
    NumericalBreakdown { lag: usize },
    #[error("cannot parse ARIMA order from {text:?}, expected \"p,d,q\"")]
    BadOrder { text: String },
    #[error("no ARIMA order could be fitted")]
    NoFit,
    #[error("ARIMA{order} estimation produced a non-finite sum of squares")]
    NonFinite { order: ArimaOrder },
    #[error("automatic order selection needs at least {min} points, got {len}")]
    AutoTooShort { len: usize, min: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
}

impl ArimaOrder {
    pub fn new(p: usize, d: usize, q: usize) -> Self {
        ArimaOrder { p, d, q }
    }
}

impl fmt::Display for ArimaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.d, self.q)
    }
}

impl FromStr for ArimaOrder {
    type Err = ArimaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArimaError::BadOrder { text: s.into() };
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut parts = trimmed.split(',');
        let mut next = || -> Result<usize, ArimaError> {
            parts
                .next()
                .ok_or_else(bad)?
                .trim()
                .parse::<usize>()
                .map_err(|_| bad())
        };
        let (p, d, q) = (next()?, next()?, next()?);
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(ArimaOrder { p, d, q })
    }
}

/// One bar of a correlogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelogramPoint {
    pub lag: usize,
    pub value: f64,
    /// `|value|` strictly exceeds the ±1.96/√n band.
    pub significant: bool,
}

/// A fitted ARIMA model: coefficients plus the trailing state needed to
/// forecast from the end of its training window.
#[derive(Debug, Clone, PartialEq)]
pub struct ArimaModel {
    pub order: ArimaOrder,
    pub ar: Vec<f64>,
    pub ma: Vec<f64>,
    /// Mean of the differenced series; zero unless `d == 0`.
    pub mean: f64,
    pub sigma2: f64,
    /// Conditional sum of squares at the optimum.
    pub css: f64,
    pub aicc: f64,
    /// Observations in the training window.
    pub train_len: usize,
    /// Length after differencing (the sample size behind `css` and `aicc`).
    pub n_diff: usize,
    /// Stamp of the last training observation.
    pub origin: MonthStamp,
    /// Last `min(p, n)` mean-adjusted differenced values, oldest first.
    pub w_tail: Vec<f64>,
    /// Last `min(q, n)` one-step residuals, oldest first.
    pub e_tail: Vec<f64>,
    /// Last value of each integration level 0..d of the training series.
    pub level_tails: Vec<f64>,
}

/// First differences, applied `d` times.
pub fn difference(values: &[f64], d: usize) -> Result<Vec<f64>, ArimaError> {
    if values.len() <= d {
        return Err(ArimaError::CannotDifference {
            len: values.len(),
            d,
        });
    }
    let mut out = values.to_vec();
    for _ in 0..d {
        out = out.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(out)
}

/// Inverse of [`difference`]: rebuild the level-0 continuation of a series
/// from its `d`-th differences. `tails` holds the last known value of each
/// integration level 0..d, all aligned at the step before `diffed` starts.
pub fn integrate(diffed: &[f64], tails: &[f64]) -> Vec<f64> {
    let mut tails = tails.to_vec();
    diffed
        .iter()
        .map(|&dv| {
            let mut v = dv;
            for k in (0..tails.len()).rev() {
                v += tails[k];
                tails[k] = v;
            }
            v
        })
        .collect()
}

/// The ±1.96/√n white-noise band drawn on correlograms.
pub fn significance_band(n: usize) -> f64 {
    1.96 / (n as f64).sqrt()
}

fn mean_of(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample variance (n − 1 divisor).
fn variance(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean_of(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1) as f64
}

fn acf_values(values: &[f64], max_lag: usize) -> Result<Vec<f64>, ArimaError> {
    let n = values.len();
    let min = max_lag + 2;
    if n < min {
        return Err(ArimaError::AcfTooShort { len: n, min });
    }
    let m = mean_of(values);
    let den: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    if den == 0.0 {
        return Err(ArimaError::Degenerate);
    }
    let mut out = Vec::with_capacity(max_lag + 1);
    out.push(1.0);
    for k in 1..=max_lag {
        let num: f64 = (k..n).map(|t| (values[t] - m) * (values[t - k] - m)).sum();
        out.push(num / den);
    }
    Ok(out)
}

/// Partial autocorrelations for lags 1..=max_lag via the Durbin-Levinson
/// recursion on the sample ACF.
fn pacf_values(values: &[f64], max_lag: usize) -> Result<Vec<f64>, ArimaError> {
    let r = acf_values(values, max_lag)?;
    let mut pac = Vec::with_capacity(max_lag);
    if max_lag == 0 {
        return Ok(pac);
    }
    let mut prev = vec![0.0; max_lag + 1];
    prev[1] = r[1];
    pac.push(r[1]);
    for k in 2..=max_lag {
        let num = r[k] - (1..k).map(|j| prev[j] * r[k - j]).sum::<f64>();
        let den = 1.0 - (1..k).map(|j| prev[j] * r[j]).sum::<f64>();
        if den.abs() < 1e-12 {
            return Err(ArimaError::NumericalBreakdown { lag: k });
        }
        let phi_kk = num / den;
        let mut cur = vec![0.0; max_lag + 1];
        for j in 1..k {
            cur[j] = prev[j] - phi_kk * prev[k - j];
        }
        cur[k] = phi_kk;
        pac.push(phi_kk);
        prev = cur;
    }
    Ok(pac)
}

/// Autocorrelations for lags 0..=max_lag with the white-noise significance
/// flag filled in. Lag 0 is always 1.
pub fn acf(values: &[f64], max_lag: usize) -> Result<Vec<CorrelogramPoint>, ArimaError> {
    let band = significance_band(values.len());
    Ok(acf_values(values, max_lag)?
        .into_iter()
        .enumerate()
        .map(|(lag, value)| CorrelogramPoint {
            lag,
            value,
            significant: value.abs() > band,
        })
        .collect())
}

/// Partial autocorrelations for lags 1..=max_lag with the white-noise
/// significance flag filled in.
pub fn pacf(values: &[f64], max_lag: usize) -> Result<Vec<CorrelogramPoint>, ArimaError> {
    let band = significance_band(values.len());
    Ok(pacf_values(values, max_lag)?
        .into_iter()
        .zip(1..)
        .map(|(value, lag)| CorrelogramPoint {
            lag,
            value,
            significant: value.abs() > band,
        })
        .collect())
}

// --- coefficient transforms -------------------------------------------------
//
// The optimizer's coordinates are unconstrained reals; tanh maps each into
// (−1, 1) as a partial correlation, and the recursion below expands those
// into AR coefficients of a stationary polynomial (Monahan's parameterization;
// the MA side is identical with the opposite sign and yields invertibility).

fn ar_trans(raw: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = raw.iter().map(|r| r.tanh()).collect();
    for j in 1..out.len() {
        let a = out[j];
        let tmp: Vec<f64> = (0..j).map(|k| out[k] - a * out[j - k - 1]).collect();
        out[..j].copy_from_slice(&tmp);
    }
    out
}

fn ma_trans(raw: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = raw.iter().map(|r| r.tanh()).collect();
    for j in 1..out.len() {
        let a = out[j];
        let tmp: Vec<f64> = (0..j).map(|k| out[k] + a * out[j - k - 1]).collect();
        out[..j].copy_from_slice(&tmp);
    }
    out
}

fn atanh_clamped(v: f64) -> f64 {
    v.clamp(-0.999999, 0.999999).atanh()
}

/// Inverse of [`ar_trans`]; `None` when the coefficients are not strictly
/// stationary.
fn ar_inv_trans(phi: &[f64]) -> Option<Vec<f64>> {
    let mut out = phi.to_vec();
    for j in (1..out.len()).rev() {
        let a = out[j];
        if a.abs() >= 1.0 {
            return None;
        }
        let den = 1.0 - a * a;
        let tmp: Vec<f64> = (0..j)
            .map(|k| (out[k] + a * out[j - k - 1]) / den)
            .collect();
        out[..j].copy_from_slice(&tmp);
    }
    if out.iter().any(|v| v.abs() >= 1.0) {
        return None;
    }
    Some(out.iter().map(|&v| atanh_clamped(v)).collect())
}

/// Inverse of [`ma_trans`]; `None` when the coefficients are not strictly
/// invertible.
fn ma_inv_trans(theta: &[f64]) -> Option<Vec<f64>> {
    let mut out = theta.to_vec();
    for j in (1..out.len()).rev() {
        let a = out[j];
        if a.abs() >= 1.0 {
            return None;
        }
        let den = 1.0 - a * a;
        let tmp: Vec<f64> = (0..j)
            .map(|k| (out[k] - a * out[j - k - 1]) / den)
            .collect();
        out[..j].copy_from_slice(&tmp);
    }
    if out.iter().any(|v| v.abs() >= 1.0) {
        return None;
    }
    Some(out.iter().map(|&v| atanh_clamped(v)).collect())
}

fn raw_to_natural(raw: &[f64], p: usize) -> (Vec<f64>, Vec<f64>) {
    (ar_trans(&raw[..p]), ma_trans(&raw[p..]))
}

fn natural_to_raw(phi: &[f64], theta: &[f64]) -> Option<Vec<f64>> {
    let mut raw = ar_inv_trans(phi)?;
    raw.extend(ma_inv_trans(theta)?);
    Some(raw)
}

/// Conditional sum of squares and the residual sequence, pre-sample values
/// treated as zero.
fn css(w: &[f64], phi: &[f64], theta: &[f64]) -> (f64, Vec<f64>) {
    let n = w.len();
    let mut e = vec![0.0; n];
    let mut total = 0.0;
    for t in 0..n {
        let mut acc = w[t];
        for (i, ph) in phi.iter().enumerate() {
            if t >= i + 1 {
                acc -= ph * w[t - 1 - i];
            }
        }
        for (j, th) in theta.iter().enumerate() {
            if t >= j + 1 {
                acc -= th * e[t - 1 - j];
            }
        }
        e[t] = acc;
        total += acc * acc;
    }
    (total, e)
}

/// Two-stage Hannan-Rissanen regression start: a long AR fit supplies residual
/// proxies, then `w_t` is regressed on lagged values and lagged proxies.
/// Returns natural-space coefficients `[φ…, θ…]`, or `None` when the sample is
/// too small or a regression is singular.
fn hannan_rissanen(w: &[f64], p: usize, q: usize) -> Option<Vec<f64>> {
    if p + q == 0 {
        return Some(Vec::new());
    }
    let n = w.len();
    let m = (p + q).max(5).min((n / 4).max(1)).min(12);
    if n <= m + p.max(q) + 1 {
        return None;
    }
    if n - m <= m {
        return None;
    }

    let mut xtx = vec![vec![0.0; m]; m];
    let mut xty = vec![0.0; m];
    for t in m..n {
        for i in 0..m {
            xty[i] += w[t - 1 - i] * w[t];
            for j in 0..m {
                xtx[i][j] += w[t - 1 - i] * w[t - 1 - j];
            }
        }
    }
    let a = solve_linear(&xtx, &xty)?;
    let mut eps = vec![0.0; n];
    for t in m..n {
        let mut acc = w[t];
        for (i, ai) in a.iter().enumerate() {
            acc -= ai * w[t - 1 - i];
        }
        eps[t] = acc;
    }

    let k = p + q;
    let start = m + p.max(q);
    if n - start <= k {
        return None;
    }
    let reg = |t: usize, i: usize| -> f64 {
        if i < p {
            w[t - 1 - i]
        } else {
            eps[t - 1 - (i - p)]
        }
    };
    let mut xtx2 = vec![vec![0.0; k]; k];
    let mut xty2 = vec![0.0; k];
    for t in start..n {
        for i in 0..k {
            xty2[i] += reg(t, i) * w[t];
            for j in 0..k {
                xtx2[i][j] += reg(t, i) * reg(t, j);
            }
        }
    }
    solve_linear(&xtx2, &xty2)
}

/// Fit an ARIMA(p,d,q) model to `series` by minimizing the conditional sum of
/// squares. Deterministic: fixed optimizer starts, fixed iteration budget.
pub fn css_fit(series: &TimeSeries, order: ArimaOrder) -> Result<ArimaModel, ArimaError> {
    let x = &series.values;
    let (p, d, q) = (order.p, order.d, order.q);
    let w_raw = difference(x, d)?;
    let n = w_raw.len();
    let min = 10 + p + q;
    if n < min {
        return Err(ArimaError::TooShort { order, len: n, min });
    }
    let mean = if d == 0 { mean_of(&w_raw) } else { 0.0 };
    let w: Vec<f64> = w_raw.iter().map(|v| v - mean).collect();

    let dim = p + q;
    let mut starts = vec![vec![0.0; dim], vec![0.2; dim], vec![-0.2; dim]];
    if let Some(nat) = hannan_rissanen(&w, p, q) {
        if let Some(raw) = natural_to_raw(&nat[..p], &nat[p..]) {
            starts.push(raw);
        }
    }

    let mut obj = |raw: &[f64]| -> f64 {
        let (phi, theta) = raw_to_natural(raw, p);
        css(&w, &phi, &theta).0
    };
    let mut best: Option<(Vec<f64>, f64)> = None;
    for s in &starts {
        let (xw, fv) = nelder_mead(&mut obj, s, 0.1, 500, 1e-10, None);
        match &best {
            Some((_, bv)) if fv >= *bv => {}
            _ => best = Some((xw, fv)),
        }
    }
    let (raw, cssv) = best.expect("at least three optimizer starts");
    if !cssv.is_finite() {
        return Err(ArimaError::NonFinite { order });
    }

    let (ar, ma) = raw_to_natural(&raw, p);
    let (cssv, e) = css(&w, &ar, &ma);
    let nf = n as f64;
    let sigma2 = cssv / nf;
    let k = (p + q + 1) as f64;
    let aicc = nf * (cssv / nf).ln() + 2.0 * k + 2.0 * k * (k + 1.0) / (nf - k - 1.0);

    let mut level_tails = Vec::with_capacity(d);
    for lvl in 0..d {
        let series_k = difference(x, lvl)?;
        level_tails.push(*series_k.last().expect("differenced series is non-empty"));
    }
    Ok(ArimaModel {
        order,
        ar,
        ma,
        mean,
        sigma2,
        css: cssv,
        aicc,
        train_len: x.len(),
        n_diff: n,
        origin: series.end(),
        w_tail: w[n - p.min(n)..].to_vec(),
        e_tail: e[n - q.min(n)..].to_vec(),
        level_tails,
    })
}

/// Forecast `horizon` steps past the model's training window. Future shocks
/// take their zero expectation; differenced predictions are integrated back
/// through the stored level tails, and the mean is restored when `d == 0`.
pub fn arima_forecast(model: &ArimaModel, horizon: usize) -> ForecastResult {
    let mut preds: Vec<f64> = Vec::with_capacity(horizon);
    for step in 0..horizon {
        let mut acc = 0.0;
        for (i, ph) in model.ar.iter().enumerate() {
            let off = step as isize - 1 - i as isize;
            let v = if off >= 0 {
                preds[off as usize]
            } else {
                let back = (-off) as usize;
                if back <= model.w_tail.len() {
                    model.w_tail[model.w_tail.len() - back]
                } else {
                    0.0
                }
            };
            acc += ph * v;
        }
        for (j, th) in model.ma.iter().enumerate() {
            let off = step as isize - 1 - j as isize;
            if off < 0 {
                let back = (-off) as usize;
                if back <= model.e_tail.len() {
                    acc += th * model.e_tail[model.e_tail.len() - back];
                }
            }
        }
        preds.push(acc);
    }
    let values = if model.order.d == 0 {
        preds.into_iter().map(|v| v + model.mean).collect()
    } else {
        integrate(&preds, &model.level_tails)
    };
    ForecastResult::new(model.origin, values)
}

/// Pick an order automatically: the differencing degree comes from a variance
/// and lag-1 autocorrelation heuristic (at most 2), then all (p, q) with
/// p ≤ 5, q ≤ 5, p + q ≤ 5 are fitted and the smallest corrected AIC wins.
/// Orders that fail to fit are skipped.
pub fn auto_order(series: &TimeSeries) -> Result<ArimaOrder, ArimaError> {
    let n = series.len();
    if n < 30 {
        return Err(ArimaError::AutoTooShort { len: n, min: 30 });
    }
    let mut cand = series.values.clone();
    let mut d = 0usize;
    while d < 2 {
        if variance(&cand) <= 0.0 {
            break;
        }
        let r1 = acf_values(&cand, 1)?[1];
        let dif = difference(&cand, 1)?;
        if r1 > 0.95 || variance(&dif) < variance(&cand) {
            d += 1;
            cand = dif;
        } else {
            break;
        }
    }

    let mut best: Option<(ArimaOrder, f64)> = None;
    for p in 0..=5 {
        for q in 0..=5 {
            if p + q > 5 {
                continue;
            }
            let order = ArimaOrder { p, d, q };
            let Ok(model) = css_fit(series, order) else {
                continue;
            };
            if !model.aicc.is_finite() {
                continue;
            }
            match &best {
                Some((_, bv)) if model.aicc >= *bv => {}
                _ => best = Some((order, model.aicc)),
            }
        }
    }
    best.map(|(o, _)| o).ok_or(ArimaError::NoFit)
}
