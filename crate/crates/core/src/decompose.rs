//! Classical additive decomposition: a centered moving-average trend, zero-sum
//! seasonal figures keyed by calendar month, and the residual random component.
//!
//! Trend is undefined for the first and last `frequency/2` positions (the
//! centered window does not fit there); random is defined exactly where trend
//! is. Undefined cells are `None`, never sentinel numbers.

use thiserror::Error;

use crate::series::{summary, MonthStamp, SeriesError, SummaryStats, TimeSeries};

#[derive(Debug, Error, PartialEq)]
pub enum DecomposeError {
    #[error("series too short: {len} points, need at least {min}")]
    TooShort { len: usize, min: usize },
    #[error("no detrended values for seasonal position {month}")]
    EmptyMonth { month: u32 },
    #[error("decomposition requires an even frequency, got {frequency}")]
    UnsupportedFrequency { frequency: u32 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// The three additive components of a decomposed series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Trend,
    Seasonal,
    Random,
}

impl std::fmt::Display for Component {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Component::Trend => "trend",
            Component::Seasonal => "seasonal",
            Component::Random => "random",
        };
        f.write_str(name)
    }
}

/// Result of [`decompose`]: the source series plus its three components.
///
/// `trend` and `random` are `None` at the first and last `frequency/2`
/// positions. `seasonal` repeats one figure per calendar month across the
/// whole span, so `observed = trend + seasonal + random` holds exactly
/// wherever trend is defined.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub source: TimeSeries,
    pub trend: Vec<Option<f64>>,
    /// One figure per cycle position (calendar month for monthly data),
    /// centered so they sum to zero.
    pub seasonal_figures: Vec<f64>,
    pub seasonal: Vec<f64>,
    pub random: Vec<Option<f64>>,
}

impl Decomposition {
    /// Cycle position (0-based calendar month for monthly data) of index `i`.
    pub fn cycle_position(&self, i: usize) -> usize {
        cycle_position(&self.source, i)
    }

    fn component_values(&self, which: Component) -> Vec<Option<f64>> {
        match which {
            Component::Trend => self.trend.clone(),
            Component::Seasonal => self.seasonal.iter().copied().map(Some).collect(),
            Component::Random => self.random.clone(),
        }
    }
}

/// Percentage contribution of one component to the aggregate series.
#[derive(Debug, Clone, PartialEq)]
pub struct ContributionStats {
    pub component: Component,
    /// `100 · component[i] / observed[i]`, at positions where the full
    /// decomposition is defined, in series order.
    pub percentages: Vec<f64>,
    pub stats: SummaryStats,
    pub argmax_stamp: MonthStamp,
    pub argmin_stamp: MonthStamp,
}

fn cycle_position(series: &TimeSeries, i: usize) -> usize {
    (series.start.month_index0() + i) % series.frequency as usize
}

/// 2×f centered moving average; the classical trend filter for even
/// frequencies. Entry `i` averages the window `i−f/2 ..= i+f/2` with half
/// weight on the two endpoints, and is `None` where that window leaves the
/// series.
pub fn centered_ma(series: &TimeSeries) -> Result<Vec<Option<f64>>, DecomposeError> {
    let f = series.frequency as usize;
    if f % 2 != 0 {
        return Err(DecomposeError::UnsupportedFrequency {
            frequency: series.frequency,
        });
    }
    let n = series.len();
    if n < f + 1 {
        return Err(DecomposeError::TooShort { len: n, min: f + 1 });
    }
    let half = f / 2;
    let x = &series.values;
    let mut trend = vec![None; n];
    for i in half..n - half {
        let mut acc = (x[i - half] + x[i + half]) / 2.0;
        for j in i - half + 1..i + half {
            acc += x[j];
        }
        trend[i] = Some(acc / f as f64);
    }
    Ok(trend)
}

/// Seasonal figures from a series and its trend: per cycle position, the mean
/// of the detrended values, centered so the figures sum to zero.
pub fn seasonal_figures(
    series: &TimeSeries,
    trend: &[Option<f64>],
) -> Result<Vec<f64>, DecomposeError> {
    let f = series.frequency as usize;
    let mut sums = vec![0.0; f];
    let mut counts = vec![0usize; f];
    for (i, t) in trend.iter().enumerate() {
        if let Some(t) = t {
            let pos = cycle_position(series, i);
            sums[pos] += series.values[i] - t;
            counts[pos] += 1;
        }
    }
    for (pos, &count) in counts.iter().enumerate() {
        if count == 0 {
            return Err(DecomposeError::EmptyMonth {
                month: pos as u32 + 1,
            });
        }
    }
    let mut figures: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| s / c as f64)
        .collect();
    let mean = figures.iter().sum::<f64>() / f as f64;
    for fig in &mut figures {
        *fig -= mean;
    }
    Ok(figures)
}

/// Full classical additive decomposition. Requires at least two cycles of
/// data so every cycle position has a defined detrended value.
pub fn decompose(series: &TimeSeries) -> Result<Decomposition, DecomposeError> {
    let f = series.frequency as usize;
    let n = series.len();
    if n < 2 * f {
        return Err(DecomposeError::TooShort { len: n, min: 2 * f });
    }
    let trend = centered_ma(series)?;
    let figures = seasonal_figures(series, &trend)?;
    let seasonal: Vec<f64> = (0..n).map(|i| figures[cycle_position(series, i)]).collect();
    let random: Vec<Option<f64>> = (0..n)
        .map(|i| trend[i].map(|t| series.values[i] - t - seasonal[i]))
        .collect();
    Ok(Decomposition {
        source: series.clone(),
        trend,
        seasonal_figures: figures,
        seasonal,
        random,
    })
}

/// Percentage contribution of `which` to the aggregate, with summary
/// statistics and the stamps attaining the extremes.
///
/// Percentages are taken only at positions where the whole decomposition is
/// defined (trend and random both present), so the three components are
/// compared over one common window.
pub fn contribution(
    dec: &Decomposition,
    which: Component,
) -> Result<ContributionStats, DecomposeError> {
    let values = dec.component_values(which);
    let mut percentages = Vec::new();
    let mut indices = Vec::new();
    for (i, value) in values.iter().enumerate() {
        if dec.trend[i].is_none() {
            continue;
        }
        if let Some(v) = value {
            percentages.push(100.0 * v / dec.source.values[i]);
            indices.push(i);
        }
    }
    let stats = summary(&percentages)?;
    let mut argmax = 0usize;
    let mut argmin = 0usize;
    for (k, &p) in percentages.iter().enumerate() {
        if p > percentages[argmax] {
            argmax = k;
        }
        if p < percentages[argmin] {
            argmin = k;
        }
    }
    Ok(ContributionStats {
        component: which,
        percentages,
        stats,
        argmax_stamp: dec.source.stamp_at(indices[argmax]),
        argmin_stamp: dec.source.stamp_at(indices[argmin]),
    })
}
