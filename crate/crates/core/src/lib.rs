//! Time-series toolkit for monthly index data: classical additive
//! decomposition, Holt / Holt-Winters exponential smoothing, OLS trend
//! regression, ARIMA(p,d,q) estimation with automatic order selection, and a
//! six-method forecast evaluation harness with rolling-origin backtesting.
//!
//! The crate ships an embedded 84-month healthcare sector index fixture
//! (January 2010 – December 2016) so the entire evaluation experiment runs
//! out of the box; see [`fixture::healthcare`].
//!
//! Everything here is pure and deterministic: fitting the same data twice
//! produces bit-identical models, forecasts, and reports.

pub mod arima;
pub mod decompose;
pub mod evaluate;
pub mod fixture;
pub mod forecast;
pub mod io;
mod optim;
pub mod regression;
pub mod series;
pub mod smoothing;

pub use arima::{acf, arima_forecast, auto_order, css_fit, difference, integrate, pacf,
    significance_band};
pub use arima::{ArimaError, ArimaModel, ArimaOrder, CorrelogramPoint};
pub use decompose::{centered_ma, contribution, decompose, seasonal_figures};
pub use decompose::{Component, ContributionStats, DecomposeError, Decomposition};
pub use evaluate::{compare, metrics, run_method, Comparison, ComparisonRow};
pub use evaluate::{EvalError, EvaluationRow, Method, MethodReport, Metrics};
pub use forecast::{ForecastPoint, ForecastResult};
pub use regression::{ols_extrapolate, ols_fit, LinearModel, RegressionError};
pub use series::{summary, MonthStamp, SeriesError, SummaryStats, TimeSeries};
pub use smoothing::{hw_eval, hw_fit, hw_forecast, SmoothError, SmoothingModel, SmoothingSpec};
