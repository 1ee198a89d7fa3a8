//! The six-method out-of-sample comparison: each method trains on the window
//! ending at `train_end`, produces twelve monthly forecasts, and is scored
//! against the corresponding actuals with percentage-error summaries and RMSE.
//!
//! Methods:
//!
//! * **I**   — Holt-Winters fitted once, twelve forecasts from the training
//!   origin.
//! * **II**  — Holt-Winters with Method I's weights, state advanced through
//!   each realized month, always forecasting one step ahead.
//! * **III** — classical decomposition; the trend is extended with Holt
//!   smoothing and recombined with the training seasonal figures.
//! * **IV**  — like III but the trend is extended with a least-squares line.
//! * **V**   — ARIMA at the automatically selected order, fitted once.
//! * **VI**  — ARIMA re-selected and refitted each month, one step ahead.
//!
//! Methods III and IV forecast the *smoothed* series (trend + seasonal), so
//! they are scored against the full-series decomposition over the twelve
//! months following the last defined training trend value, not against raw
//! observations; the other methods are scored against the twelve raw values
//! after `train_end`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::arima::{arima_forecast, auto_order, css_fit, ArimaError};
use crate::decompose::{decompose, DecomposeError};
use crate::regression::{ols_extrapolate, ols_fit, RegressionError};
use crate::series::{MonthStamp, SeriesError, TimeSeries};
use crate::smoothing::{hw_eval, hw_fit, hw_forecast, SmoothError, SmoothingSpec};

/// Forecasts produced per method in the comparison.
pub const EVAL_HORIZON: usize = 12;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("need {needed} actuals after {train_end}, only {available} available")]
    MissingActuals {
        train_end: MonthStamp,
        needed: usize,
        available: usize,
    },
    #[error("actual value at {stamp} is zero, percentage error is undefined")]
    ZeroActual { stamp: MonthStamp },
    #[error("smoothed actual at {stamp} is undefined; series does not span the evaluation window")]
    InsufficientSpan { stamp: MonthStamp },
    #[error("no reports to compare")]
    NoReports,
    #[error("cannot summarize an empty set of evaluation rows")]
    EmptyRows,
    #[error("unknown method {text:?}, expected a roman numeral I through VI")]
    UnknownMethod { text: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Smooth(#[from] SmoothError),
    #[error(transparent)]
    Regression(#[from] RegressionError),
    #[error(transparent)]
    Arima(#[from] ArimaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::I,
        Method::II,
        Method::III,
        Method::IV,
        Method::V,
        Method::VI,
    ];

    /// Position in the comparison table, 1-based.
    pub fn rank(self) -> usize {
        self as usize + 1
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let roman = ["I", "II", "III", "IV", "V", "VI"][*self as usize];
        f.write_str(roman)
    }
}

impl FromStr for Method {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(Method::I),
            "II" | "2" => Ok(Method::II),
            "III" | "3" => Ok(Method::III),
            "IV" | "4" => Ok(Method::IV),
            "V" | "5" => Ok(Method::V),
            "VI" | "6" => Ok(Method::VI),
            _ => Err(EvalError::UnknownMethod { text: s.into() }),
        }
    }
}

/// One evaluated month: the forecast, what it is scored against, and the
/// signed percentage error `100·(forecast − actual)/actual`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationRow {
    pub stamp: MonthStamp,
    pub actual: f64,
    pub forecast: f64,
    pub pct_error: f64,
}

/// Percentage-error summary (over absolute errors) plus RMSE in raw units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub min_err: f64,
    pub max_err: f64,
    pub mean_err: f64,
    /// Sample standard deviation of the absolute percentage errors; zero for
    /// a single row.
    pub sd_err: f64,
    pub rmse: f64,
}

/// A method's evaluated rows with the summary metrics flattened alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodReport {
    pub method: Method,
    pub rows: Vec<EvaluationRow>,
    pub min_err: f64,
    pub max_err: f64,
    pub mean_err: f64,
    pub sd_err: f64,
    pub rmse: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub method: Method,
    pub min_err: f64,
    pub max_err: f64,
    pub mean_err: f64,
    pub sd_err: f64,
    pub rmse: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// One row per report, in method order.
    pub rows: Vec<ComparisonRow>,
    /// Lowest RMSE; ties go to the earlier method.
    pub winner: Method,
}

/// Summarize evaluation rows: min/max/mean/sd of the absolute percentage
/// errors and the RMSE of the raw forecast errors.
pub fn metrics(rows: &[EvaluationRow]) -> Result<Metrics, EvalError> {
    if rows.is_empty() {
        return Err(EvalError::EmptyRows);
    }
    for row in rows {
        if row.actual == 0.0 {
            return Err(EvalError::ZeroActual { stamp: row.stamp });
        }
    }
    let n = rows.len() as f64;
    let abs: Vec<f64> = rows.iter().map(|r| r.pct_error.abs()).collect();
    let mean = abs.iter().sum::<f64>() / n;
    let sd = if rows.len() == 1 {
        0.0
    } else {
        (abs.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    let rmse = (rows
        .iter()
        .map(|r| (r.forecast - r.actual) * (r.forecast - r.actual))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(Metrics {
        min_err: abs.iter().copied().fold(f64::INFINITY, f64::min),
        max_err: abs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean_err: mean,
        sd_err: sd,
        rmse,
    })
}

fn build_rows(
    stamps: &[MonthStamp],
    actuals: &[f64],
    forecasts: &[f64],
) -> Result<Vec<EvaluationRow>, EvalError> {
    stamps
        .iter()
        .zip(actuals)
        .zip(forecasts)
        .map(|((&stamp, &actual), &forecast)| {
            if actual == 0.0 {
                return Err(EvalError::ZeroActual { stamp });
            }
            Ok(EvaluationRow {
                stamp,
                actual,
                forecast,
                pct_error: 100.0 * (forecast - actual) / actual,
            })
        })
        .collect()
}

fn report(method: Method, rows: Vec<EvaluationRow>) -> Result<MethodReport, EvalError> {
    let m = metrics(&rows)?;
    Ok(MethodReport {
        method,
        rows,
        min_err: m.min_err,
        max_err: m.max_err,
        mean_err: m.mean_err,
        sd_err: m.sd_err,
        rmse: m.rmse,
    })
}

/// Stamps and raw actuals for the twelve months after `train_end`.
fn raw_eval_window(
    series: &TimeSeries,
    train_end: MonthStamp,
) -> Result<(Vec<MonthStamp>, Vec<f64>), EvalError> {
    let train_len = series.index_of(train_end)? + 1;
    let available = series.len() - train_len;
    if available < EVAL_HORIZON {
        return Err(EvalError::MissingActuals {
            train_end,
            needed: EVAL_HORIZON,
            available,
        });
    }
    let stamps: Vec<MonthStamp> = (1..=EVAL_HORIZON)
        .map(|k| train_end.add_months(k as i64))
        .collect();
    let actuals = series.values[train_len..train_len + EVAL_HORIZON].to_vec();
    Ok((stamps, actuals))
}

fn method_i(series: &TimeSeries, train_end: MonthStamp) -> Result<Vec<EvaluationRow>, EvalError> {
    let train = series.slice(series.start, train_end)?;
    let (stamps, actuals) = raw_eval_window(series, train_end)?;
    let model = hw_fit(&train, SmoothingSpec::holt_winters(train.frequency))?;
    let fc = hw_forecast(&model, EVAL_HORIZON);
    build_rows(&stamps, &actuals, &fc.values())
}

fn method_ii(series: &TimeSeries, train_end: MonthStamp) -> Result<Vec<EvaluationRow>, EvalError> {
    let train = series.slice(series.start, train_end)?;
    let (stamps, actuals) = raw_eval_window(series, train_end)?;
    let spec = SmoothingSpec::holt_winters(train.frequency);
    let fitted = hw_fit(&train, spec)?;
    let (alpha, beta, gamma) = (
        fitted.alpha,
        fitted.beta.unwrap_or(0.0),
        fitted.gamma.unwrap_or(0.0),
    );
    let mut forecasts = Vec::with_capacity(EVAL_HORIZON);
    for k in 0..EVAL_HORIZON {
        let window = series.slice(series.start, train_end.add_months(k as i64))?;
        let state = hw_eval(&window, spec, alpha, beta, gamma)?;
        forecasts.push(hw_forecast(&state, 1).points[0].value);
    }
    build_rows(&stamps, &actuals, &forecasts)
}

/// The shared scaffolding of methods III and IV: decompose the training
/// window, extend its trend twelve months with `extend`, and score
/// trend-plus-figures forecasts against the full-series decomposition.
fn decomposition_method<F>(
    series: &TimeSeries,
    train_end: MonthStamp,
    extend: F,
) -> Result<Vec<EvaluationRow>, EvalError>
where
    F: FnOnce(&TimeSeries) -> Result<Vec<f64>, EvalError>,
{
    let train = series.slice(series.start, train_end)?;
    let dec = decompose(&train)?;
    let half = (train.frequency / 2) as usize;
    let trend_vals: Vec<f64> = dec.trend.iter().flatten().copied().collect();
    let trend_series = TimeSeries::with_frequency(
        train.start.add_months(half as i64),
        train.frequency,
        trend_vals,
    )?;
    let trend_fc = extend(&trend_series)?;

    let full = decompose(series)?;
    let last_defined = trend_series.end();
    let mut stamps = Vec::with_capacity(EVAL_HORIZON);
    let mut actuals = Vec::with_capacity(EVAL_HORIZON);
    let mut forecasts = Vec::with_capacity(EVAL_HORIZON);
    for (i, &fc) in trend_fc.iter().enumerate() {
        let stamp = last_defined.add_months(i as i64 + 1);
        let pos = series
            .index_of(stamp)
            .map_err(|_| EvalError::InsufficientSpan { stamp })?;
        let trend = full.trend[pos].ok_or(EvalError::InsufficientSpan { stamp })?;
        stamps.push(stamp);
        actuals.push(trend + full.seasonal[pos]);
        forecasts.push(fc + dec.seasonal_figures[stamp.month_index0() % 12]);
    }
    build_rows(&stamps, &actuals, &forecasts)
}

fn method_iii(series: &TimeSeries, train_end: MonthStamp) -> Result<Vec<EvaluationRow>, EvalError> {
    decomposition_method(series, train_end, |trend| {
        let model = hw_fit(trend, SmoothingSpec::holt())?;
        Ok(hw_forecast(&model, EVAL_HORIZON).values())
    })
}

fn method_iv(series: &TimeSeries, train_end: MonthStamp) -> Result<Vec<EvaluationRow>, EvalError> {
    decomposition_method(series, train_end, |trend| {
        let line = ols_fit(&trend.values)?;
        Ok(ols_extrapolate(&line, trend.len(), EVAL_HORIZON))
    })
}

fn method_v(series: &TimeSeries, train_end: MonthStamp) -> Result<Vec<EvaluationRow>, EvalError> {
    let train = series.slice(series.start, train_end)?;
    let (stamps, actuals) = raw_eval_window(series, train_end)?;
    let order = auto_order(&train)?;
    let model = css_fit(&train, order)?;
    let fc = arima_forecast(&model, EVAL_HORIZON);
    build_rows(&stamps, &actuals, &fc.values())
}

fn method_vi(series: &TimeSeries, train_end: MonthStamp) -> Result<Vec<EvaluationRow>, EvalError> {
    let (stamps, actuals) = raw_eval_window(series, train_end)?;
    let mut forecasts = Vec::with_capacity(EVAL_HORIZON);
    for k in 0..EVAL_HORIZON {
        let window = series.slice(series.start, train_end.add_months(k as i64))?;
        let order = auto_order(&window)?;
        let model = css_fit(&window, order)?;
        forecasts.push(arima_forecast(&model, 1).points[0].value);
    }
    build_rows(&stamps, &actuals, &forecasts)
}

/// Evaluate one method over the twelve months after `train_end`.
pub fn run_method(
    series: &TimeSeries,
    method: Method,
    train_end: MonthStamp,
) -> Result<MethodReport, EvalError> {
    let rows = match method {
        Method::I => method_i(series, train_end),
        Method::II => method_ii(series, train_end),
        Method::III => method_iii(series, train_end),
        Method::IV => method_iv(series, train_end),
        Method::V => method_v(series, train_end),
        Method::VI => method_vi(series, train_end),
    }?;
    report(method, rows)
}

/// Put reports side by side and pick the winner: lowest RMSE, ties broken by
/// method order. Rows come out in method order regardless of input order.
pub fn compare(reports: &[MethodReport]) -> Result<Comparison, EvalError> {
    if reports.is_empty() {
        return Err(EvalError::NoReports);
    }
    let mut rows: Vec<ComparisonRow> = reports
        .iter()
        .map(|r| ComparisonRow {
            method: r.method,
            min_err: r.min_err,
            max_err: r.max_err,
            mean_err: r.mean_err,
            sd_err: r.sd_err,
            rmse: r.rmse,
        })
        .collect();
    rows.sort_by_key(|r| r.method);
    let winner = rows
        .iter()
        .min_by(|a, b| a.rmse.total_cmp(&b.rmse).then(a.method.cmp(&b.method)))
        .expect("rows is non-empty")
        .method;
    Ok(Comparison { rows, winner })
}
