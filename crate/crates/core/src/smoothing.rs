//! Holt and Holt-Winters (additive) exponential smoothing: state recursion,
//! SSE-minimizing weight estimation, and h-step forecasting.
//!
//! The recursion with all components enabled is
//!
//! ```text
//! level_t = α (x_t − s_{t−f}) + (1 − α)(level_{t−1} + slope_{t−1})
//! slope_t = β (level_t − level_{t−1}) + (1 − β) slope_{t−1}
//! s_t     = γ (x_t − level_t) + (1 − γ) s_{t−f}
//! ```
//!
//! with the one-step prediction `x̂_t = level_{t−1} + slope_{t−1} + s_{t−f}`.
//! Disabled components are omitted from the recursion entirely, not run with
//! a zero weight.
//!
//! Initialization, seasonal case: the first two cycles are classically
//! decomposed; the seasonal state starts at those figures, and a least-squares
//! line through the decomposition's trend values seeds the slope and the
//! level, the level being the line's value at the recursion origin (the last
//! initialization observation) so a noiseless linear-plus-seasonal signal is
//! tracked with zero one-step error from the first fitted step. The recursion
//! then starts after the first full cycle, and `sse` counts only those
//! post-initialization steps. Non-seasonal case: level and slope start from
//! the first two observations and the recursion starts at the third (second
//! when the trend component is disabled too).

use thiserror::Error;

use crate::decompose::{centered_ma, seasonal_figures, DecomposeError};
use crate::forecast::ForecastResult;
use crate::optim::nelder_mead;
use crate::series::{MonthStamp, TimeSeries};

#[derive(Debug, Error, PartialEq)]
pub enum SmoothError {
    #[error("series too short for smoothing: {len} points, need at least {min}")]
    TooShort { len: usize, min: usize },
    #[error("seasonal smoothing requires frequency >= 2, got {frequency}")]
    BadFrequency { frequency: u32 },
    #[error("spec frequency {spec} does not match series frequency {series}")]
    FrequencyMismatch { spec: u32, series: u32 },
    #[error("smoothing weight {name} must lie in [0,1], got {value}")]
    BadWeight { name: &'static str, value: f64 },
    #[error("smoothing produced a non-finite SSE (weights {weights:?})")]
    NonFinite { weights: Vec<f64> },
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}

/// Which smoothing components are active. The level is always present.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmoothingSpec {
    pub use_trend: bool,
    pub use_seasonal: bool,
    /// Seasonal cycle length; ignored unless `use_seasonal`.
    pub frequency: u32,
}

impl SmoothingSpec {
    /// Level + trend + additive seasonal (triple smoothing).
    pub fn holt_winters(frequency: u32) -> Self {
        SmoothingSpec {
            use_trend: true,
            use_seasonal: true,
            frequency,
        }
    }

    /// Level + trend, no seasonal (double smoothing).
    pub fn holt() -> Self {
        SmoothingSpec {
            use_trend: true,
            use_seasonal: false,
            frequency: 12,
        }
    }

    /// Level only (simple smoothing).
    pub fn level_only() -> Self {
        SmoothingSpec {
            use_trend: false,
            use_seasonal: false,
            frequency: 12,
        }
    }

    fn active_weights(&self) -> usize {
        1 + usize::from(self.use_trend) + usize::from(self.use_seasonal)
    }
}

/// A fitted (or evaluated) smoothing model: weights plus the final state the
/// forecast continues from.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingModel {
    pub spec: SmoothingSpec,
    pub alpha: f64,
    /// Trend weight; `None` when the trend component is disabled.
    pub beta: Option<f64>,
    /// Seasonal weight; `None` when the seasonal component is disabled.
    pub gamma: Option<f64>,
    pub level: f64,
    pub slope: f64,
    /// Last seasonal estimate per cycle position (calendar month for monthly
    /// series); empty when the seasonal component is disabled.
    pub seasonal_state: Vec<f64>,
    /// In-sample one-step sum of squared errors over the `n_fit` steps after
    /// initialization.
    pub sse: f64,
    pub n_fit: usize,
    /// Stamp of the last training observation.
    pub origin: MonthStamp,
    /// Cycle position of `origin`; equals `origin.month_index0()` for monthly
    /// data.
    pub origin_cycle: usize,
}

struct InitState {
    level: f64,
    slope: f64,
    /// Seasonal estimates consumed by the first `frequency` recursion steps.
    season: Vec<f64>,
    /// Observation index the recursion starts at.
    start: usize,
}

struct RecursionOut {
    sse: f64,
    level: f64,
    slope: f64,
    ring: Vec<f64>,
    n_fit: usize,
}

/// Least squares with predictor 1..n rather than 0..n−1; only the slope and
/// the (shifted) intercept convention differ from [`crate::regression::ols_fit`].
fn ols_fit_1based(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    let tbar = (n as f64 + 1.0) / 2.0;
    let ybar = values.iter().sum::<f64>() / n as f64;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (t, &y) in values.iter().enumerate() {
        let dt = (t + 1) as f64 - tbar;
        sxy += dt * (y - ybar);
        sxx += dt * dt;
    }
    let slope = sxy / sxx;
    (ybar - slope * tbar, slope)
}

fn validate(series: &TimeSeries, spec: &SmoothingSpec) -> Result<(), SmoothError> {
    let n = series.len();
    if spec.use_seasonal {
        if spec.frequency < 2 {
            return Err(SmoothError::BadFrequency {
                frequency: spec.frequency,
            });
        }
        if spec.frequency != series.frequency {
            return Err(SmoothError::FrequencyMismatch {
                spec: spec.frequency,
                series: series.frequency,
            });
        }
        let min = 2 * spec.frequency as usize;
        if n < min {
            return Err(SmoothError::TooShort { len: n, min });
        }
    } else if n < 3 {
        return Err(SmoothError::TooShort { len: n, min: 3 });
    }
    Ok(())
}

fn init_state(series: &TimeSeries, spec: &SmoothingSpec) -> Result<InitState, SmoothError> {
    let x = &series.values;
    if spec.use_seasonal {
        let f = spec.frequency as usize;
        let head = TimeSeries::with_frequency(
            series.start,
            series.frequency,
            x[..2 * f].to_vec(),
        )
        .expect("head window is non-empty with frequency >= 2");
        let trend0 = centered_ma(&head)?;
        let figs = seasonal_figures(&head, &trend0)?;
        let tvals: Vec<f64> = trend0.iter().flatten().copied().collect();
        let (intercept, slope) = ols_fit_1based(&tvals);
        // place the level on the fitted line at the recursion origin
        let level = intercept + (f / 2) as f64 * slope;
        let start_cycle = series.start.month_index0();
        let season: Vec<f64> = (0..f).map(|j| figs[(start_cycle + j) % f]).collect();
        Ok(InitState {
            level,
            slope: if spec.use_trend { slope } else { 0.0 },
            season,
            start: f,
        })
    } else if spec.use_trend {
        Ok(InitState {
            level: x[1],
            slope: x[1] - x[0],
            season: Vec::new(),
            start: 2,
        })
    } else {
        Ok(InitState {
            level: x[0],
            slope: 0.0,
            season: Vec::new(),
            start: 1,
        })
    }
}

fn run_recursion(
    series: &TimeSeries,
    spec: &SmoothingSpec,
    init: &InitState,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> RecursionOut {
    let x = &series.values;
    let n = x.len();
    let f = spec.frequency as usize;
    let start_cycle = series.start.month_index0();
    let mut level = init.level;
    let mut slope = init.slope;
    let mut sse = 0.0;
    // seas_seq[j] is the seasonal estimate consumed at step start + j; the
    // recursion appends the estimate to be consumed one cycle later.
    let mut seas_seq = init.season.clone();
    for t in init.start..n {
        let j = t - init.start;
        let s_used = if spec.use_seasonal { seas_seq[j] } else { 0.0 };
        let trend_term = if spec.use_trend { slope } else { 0.0 };
        let xhat = level + trend_term + s_used;
        let err = x[t] - xhat;
        sse += err * err;
        let new_level = alpha * (x[t] - s_used) + (1.0 - alpha) * (level + trend_term);
        if spec.use_trend {
            slope = beta * (new_level - level) + (1.0 - beta) * slope;
        }
        level = new_level;
        if spec.use_seasonal {
            seas_seq.push(gamma * (x[t] - level) + (1.0 - gamma) * s_used);
        }
    }
    let mut ring = vec![0.0; if spec.use_seasonal { f } else { 0 }];
    if spec.use_seasonal {
        // the last f entries are the freshest estimate for each cycle
        // position; entry k was produced at observation start + k − f
        let len = seas_seq.len();
        for k in len - f..len {
            let obs = init.start + k - f;
            ring[(start_cycle + obs) % f] = seas_seq[k];
        }
    }
    RecursionOut {
        sse,
        level,
        slope,
        ring,
        n_fit: n - init.start,
    }
}

fn build_model(
    series: &TimeSeries,
    spec: SmoothingSpec,
    alpha: f64,
    beta: f64,
    gamma: f64,
    out: RecursionOut,
) -> SmoothingModel {
    let start_cycle = series.start.month_index0();
    SmoothingModel {
        spec,
        alpha,
        beta: spec.use_trend.then_some(beta),
        gamma: spec.use_seasonal.then_some(gamma),
        level: out.level,
        slope: out.slope,
        seasonal_state: out.ring,
        sse: out.sse,
        n_fit: out.n_fit,
        origin: series.end(),
        origin_cycle: (start_cycle + series.len() - 1) % spec.frequency.max(1) as usize,
    }
}

/// Run the smoothing recursion with fixed weights and return the resulting
/// model (state + in-sample SSE). Weights of disabled components are ignored.
pub fn hw_eval(
    series: &TimeSeries,
    spec: SmoothingSpec,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<SmoothingModel, SmoothError> {
    validate(series, &spec)?;
    for (name, value, active) in [
        ("alpha", alpha, true),
        ("beta", beta, spec.use_trend),
        ("gamma", gamma, spec.use_seasonal),
    ] {
        if active && !(0.0..=1.0).contains(&value) {
            return Err(SmoothError::BadWeight { name, value });
        }
    }
    let init = init_state(series, &spec)?;
    let out = run_recursion(series, &spec, &init, alpha, beta, gamma);
    if !out.sse.is_finite() {
        return Err(SmoothError::NonFinite {
            weights: vec![alpha, beta, gamma],
        });
    }
    Ok(build_model(series, spec, alpha, beta, gamma, out))
}

/// Fit the active smoothing weights by minimizing the in-sample one-step SSE:
/// a 0.1-step grid over the active weights picks the basin, then Nelder-Mead
/// (box-clamped to [0,1]) refines it. Deterministic throughout.
pub fn hw_fit(series: &TimeSeries, spec: SmoothingSpec) -> Result<SmoothingModel, SmoothError> {
    validate(series, &spec)?;
    let init = init_state(series, &spec)?;
    let active = spec.active_weights();

    let unpack = |w: &[f64]| -> (f64, f64, f64) {
        let a = w[0];
        let b = if spec.use_trend { w[1] } else { 0.0 };
        let g = if spec.use_seasonal { w[active - 1] } else { 0.0 };
        (a, b, g)
    };
    let mut obj = |w: &[f64]| -> f64 {
        let (a, b, g) = unpack(w);
        run_recursion(series, &spec, &init, a, b, g).sse
    };

    // coarse grid, 0.0..=1.0 in steps of 0.1 per active weight
    let total = 11usize.pow(active as u32);
    let mut best_w = vec![0.0; active];
    let mut best_v = f64::INFINITY;
    for rank in 0..total {
        let mut r = rank;
        let mut w = vec![0.0; active];
        for axis in (0..active).rev() {
            w[axis] = (r % 11) as f64 / 10.0;
            r /= 11;
        }
        let v = obj(&w);
        if v < best_v {
            best_v = v;
            best_w = w;
        }
    }
    let (w, _) = nelder_mead(&mut obj, &best_w, 0.1, 500, 1e-10, Some((0.0, 1.0)));

    let (alpha, beta, gamma) = unpack(&w);
    let out = run_recursion(series, &spec, &init, alpha, beta, gamma);
    if !out.sse.is_finite() {
        return Err(SmoothError::NonFinite { weights: w });
    }
    Ok(build_model(series, spec, alpha, beta, gamma, out))
}

/// Forecast `horizon` steps ahead of the model's origin:
/// `x̂_{t+h} = level + h·slope + s[cycle(t+h)]`, with disabled components
/// omitted.
pub fn hw_forecast(model: &SmoothingModel, horizon: usize) -> ForecastResult {
    let f = model.spec.frequency as usize;
    let values: Vec<f64> = (1..=horizon)
        .map(|h| {
            let mut v = model.level;
            if model.spec.use_trend {
                v += h as f64 * model.slope;
            }
            if model.spec.use_seasonal {
                v += model.seasonal_state[(model.origin_cycle + h) % f];
            }
            v
        })
        .collect();
    ForecastResult::new(model.origin, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::healthcare;
    use approx::assert_abs_diff_eq;

    fn train72() -> TimeSeries {
        let full = healthcare();
        full.slice(full.start, MonthStamp::new(2015, 12).unwrap())
            .unwrap()
    }

    fn exact_signal(n: usize) -> TimeSeries {
        let s = [40.0, -10.0, 25.0, -35.0, 5.0, 15.0, -30.0, 20.0, -5.0, 10.0, -25.0, -10.0];
        TimeSeries::new(
            MonthStamp::new(2010, 1).unwrap(),
            (0..n).map(|t| 5.0 + 3.0 * t as f64 + s[t % 12]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn healthcare_fit_golden() {
        let m = hw_fit(&train72(), SmoothingSpec::holt_winters(12)).unwrap();
        assert_abs_diff_eq!(m.alpha, 0.5583009690, epsilon = 1e-4);
        assert_abs_diff_eq!(m.beta.unwrap(), 0.0930198387, epsilon = 1e-4);
        assert_abs_diff_eq!(m.gamma.unwrap(), 0.9687271707, epsilon = 1e-4);
        assert_abs_diff_eq!(m.sse, 23784912.46, epsilon = 1.0);
        assert_abs_diff_eq!(m.level, 17071.787293, epsilon = 0.1);
        assert_abs_diff_eq!(m.slope, 190.925949, epsilon = 0.01);
        assert_eq!(m.n_fit, 60);
        assert_eq!(m.origin, MonthStamp::new(2015, 12).unwrap());
    }

    #[test]
    fn healthcare_forecast_golden() {
        let m = hw_fit(&train72(), SmoothingSpec::holt_winters(12)).unwrap();
        let fc = hw_forecast(&m, 12);
        let expected = [
            17713.289502, 17776.037808, 18081.025557, 17488.937013, 17931.834730,
            18086.857234, 18712.275831, 19270.339151, 19146.995172, 19155.094656,
            18436.557327, 19201.043667,
        ];
        assert_eq!(fc.points[0].stamp, MonthStamp::new(2016, 1).unwrap());
        for (p, want) in fc.points.iter().zip(expected) {
            assert_abs_diff_eq!(p.value, want, epsilon = 0.5);
        }
    }

    #[test]
    fn holt_on_trend_golden() {
        // the 60 defined trend values of the decomposed training window
        let dec = crate::decompose::decompose(&train72()).unwrap();
        let tvals: Vec<f64> = dec.trend.iter().flatten().copied().collect();
        assert_eq!(tvals.len(), 60);
        let ts = TimeSeries::new(MonthStamp::new(2010, 7).unwrap(), tvals).unwrap();
        let m = hw_fit(&ts, SmoothingSpec::holt()).unwrap();
        assert_abs_diff_eq!(m.alpha, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(m.beta.unwrap(), 1.0, epsilon = 1e-6);
        assert!(m.gamma.is_none());
        assert!(m.seasonal_state.is_empty());
        assert_abs_diff_eq!(m.sse, 69279.2326, epsilon = 0.01);
        let fc = hw_forecast(&m, 12);
        assert_abs_diff_eq!(fc.points[0].value, 16932.208333, epsilon = 1e-3);
        assert_abs_diff_eq!(fc.points[11].value, 18560.666667, epsilon = 1e-3);
    }

    #[test]
    fn exact_signal_fits_with_zero_error() {
        let sig = exact_signal(60);
        let m = hw_fit(&sig, SmoothingSpec::holt_winters(12)).unwrap();
        assert!(
            m.sse < 1e-6 * sig.len() as f64,
            "sse {} should vanish on a noiseless signal",
            m.sse
        );
        let fc = hw_forecast(&m, 12);
        for (h, p) in fc.points.iter().enumerate() {
            let t = 60 + h;
            let s = [40.0, -10.0, 25.0, -35.0, 5.0, 15.0, -30.0, 20.0, -5.0, 10.0, -25.0, -10.0];
            let truth = 5.0 + 3.0 * t as f64 + s[t % 12];
            assert_abs_diff_eq!(p.value, truth, epsilon = 1e-6);
        }
    }

    #[test]
    fn pure_level_tracking() {
        // alpha = 1 with a zero initial slope makes the level shadow the data
        let ts = TimeSeries::new(
            MonthStamp::new(2012, 1).unwrap(),
            vec![7.0, 7.0, 11.0, 2.0, 19.0, 5.0],
        )
        .unwrap();
        let m = hw_eval(&ts, SmoothingSpec::holt(), 1.0, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(m.level, 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.slope, 0.0, epsilon = 1e-12);
        let fc = hw_forecast(&m, 1);
        assert_abs_diff_eq!(fc.points[0].value, 5.0, epsilon = 1e-12);
    }

    #[test]
    fn linear_trend_consistency() {
        let ts = TimeSeries::new(
            MonthStamp::new(2010, 1).unwrap(),
            (0..30).map(|t| 10.0 + 4.0 * t as f64).collect(),
        )
        .unwrap();
        let m = hw_fit(&ts, SmoothingSpec::holt()).unwrap();
        assert!(m.sse < 1e-6 * 30.0);
        let fc = hw_forecast(&m, 5);
        for (h, p) in fc.points.iter().enumerate() {
            assert_abs_diff_eq!(p.value, 10.0 + 4.0 * (30 + h) as f64, epsilon = 1e-6);
        }
        // with the seasonal component off, successive forecasts step by the slope
        for w in fc.points.windows(2) {
            assert_abs_diff_eq!(w[1].value - w[0].value, m.slope, epsilon = 1e-9);
        }
    }

    #[test]
    fn shift_equivariance_at_fixed_weights() {
        let base = train72();
        let shifted = TimeSeries::new(base.start, base.values.iter().map(|v| v + 512.0).collect())
            .unwrap();
        let spec = SmoothingSpec::holt_winters(12);
        let m0 = hw_eval(&base, spec, 0.5, 0.1, 0.9).unwrap();
        let m1 = hw_eval(&shifted, spec, 0.5, 0.1, 0.9).unwrap();
        assert_abs_diff_eq!(m1.level - m0.level, 512.0, epsilon = 1e-6);
        assert_abs_diff_eq!(m1.slope, m0.slope, epsilon = 1e-6);
        assert_abs_diff_eq!(m1.sse, m0.sse, epsilon = 1e-4 * m0.sse.max(1.0));
        for (a, b) in m0.seasonal_state.iter().zip(&m1.seasonal_state) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-6);
        }
        let f0 = hw_forecast(&m0, 6);
        let f1 = hw_forecast(&m1, 6);
        for (a, b) in f0.points.iter().zip(&f1.points) {
            assert_abs_diff_eq!(b.value - a.value, 512.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn determinism_bitwise() {
        let a = hw_fit(&train72(), SmoothingSpec::holt_winters(12)).unwrap();
        let b = hw_fit(&train72(), SmoothingSpec::holt_winters(12)).unwrap();
        assert_eq!(a.alpha.to_bits(), b.alpha.to_bits());
        assert_eq!(a.sse.to_bits(), b.sse.to_bits());
        assert_eq!(a.level.to_bits(), b.level.to_bits());
        assert_eq!(
            hw_forecast(&a, 12).values(),
            hw_forecast(&b, 12).values()
        );
    }

    #[test]
    fn fitted_weights_beat_grid() {
        let m = hw_fit(&train72(), SmoothingSpec::holt_winters(12)).unwrap();
        let spec = SmoothingSpec::holt_winters(12);
        for ai in 0..=10 {
            for bi in 0..=10 {
                for gi in 0..=10 {
                    let cand = hw_eval(
                        &train72(),
                        spec,
                        ai as f64 / 10.0,
                        bi as f64 / 10.0,
                        gi as f64 / 10.0,
                    )
                    .unwrap();
                    assert!(
                        m.sse <= cand.sse + 1e-9,
                        "grid point ({ai},{bi},{gi}) beat the fit: {} < {}",
                        cand.sse,
                        m.sse
                    );
                }
            }
        }
    }

    #[test]
    fn too_short_errors() {
        let short = TimeSeries::new(MonthStamp::new(2010, 1).unwrap(), vec![1.0; 23]).unwrap();
        assert_eq!(
            hw_fit(&short, SmoothingSpec::holt_winters(12)).unwrap_err(),
            SmoothError::TooShort { len: 23, min: 24 }
        );
        let tiny = TimeSeries::new(MonthStamp::new(2010, 1).unwrap(), vec![1.0, 2.0]).unwrap();
        assert_eq!(
            hw_fit(&tiny, SmoothingSpec::holt()).unwrap_err(),
            SmoothError::TooShort { len: 2, min: 3 }
        );
    }

    #[test]
    fn frequency_mismatch_rejected() {
        let quarterly = TimeSeries::with_frequency(
            MonthStamp::new(2010, 1).unwrap(),
            4,
            vec![1.0; 20],
        )
        .unwrap();
        assert_eq!(
            hw_fit(&quarterly, SmoothingSpec::holt_winters(12)).unwrap_err(),
            SmoothError::FrequencyMismatch { spec: 12, series: 4 }
        );
    }

    #[test]
    fn bad_weight_rejected() {
        let err = hw_eval(&train72(), SmoothingSpec::holt_winters(12), 1.2, 0.1, 0.1).unwrap_err();
        assert_eq!(
            err,
            SmoothError::BadWeight {
                name: "alpha",
                value: 1.2
            }
        );
        // weights of disabled components are ignored, not validated
        assert!(hw_eval(&train72(), SmoothingSpec::holt(), 0.5, 0.5, 9.0).is_ok());
    }
}
