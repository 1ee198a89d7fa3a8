//! Core value objects: the month axis, the series container, and summary
//! statistics. Everything downstream builds on these.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("month must be in 1..=12, got {month}")]
    InvalidMonth { month: u32 },
    #[error("cannot parse month stamp from {text:?}, expected YYYY-MM")]
    StampFormat { text: String },
    #[error("stamp {stamp} lies outside the series span {start}..{end}")]
    StampOutOfRange {
        stamp: MonthStamp,
        start: MonthStamp,
        end: MonthStamp,
    },
    #[error("slice range is reversed: {from} comes after {to}")]
    ReversedRange { from: MonthStamp, to: MonthStamp },
    #[error("series frequency must be at least 2, got {frequency}")]
    BadFrequency { frequency: u32 },
    #[error("operation requires a non-empty sequence")]
    EmptyInput,
}

/// A calendar month: the time axis of every series in this crate.
///
/// Ordering is the natural one ((y1,m1) < (y2,m2) iff y1 < y2, or the years
/// are equal and m1 < m2), which the field order makes derivable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonthStamp {
    pub year: i32,
    pub month: u32,
}

impl MonthStamp {
    pub fn new(year: i32, month: u32) -> Result<Self, SeriesError> {
        if !(1..=12).contains(&month) {
            return Err(SeriesError::InvalidMonth { month });
        }
        Ok(MonthStamp { year, month })
    }

    /// Zero-based calendar month (January = 0), the seasonal-cycle key.
    pub fn month_index0(&self) -> usize {
        (self.month - 1) as usize
    }

    /// Shift by `k` months (negative moves backwards). Total-months
    /// arithmetic, so `add_months(k).add_months(-k)` is always the identity.
    pub fn add_months(&self, k: i64) -> MonthStamp {
        let total = self.year as i64 * 12 + (self.month as i64 - 1) + k;
        MonthStamp {
            year: total.div_euclid(12) as i32,
            month: (total.rem_euclid(12) + 1) as u32,
        }
    }

    /// Signed number of months from `other` to `self`.
    pub fn months_since(&self, other: MonthStamp) -> i64 {
        (self.year as i64 * 12 + self.month as i64) - (other.year as i64 * 12 + other.month as i64)
    }
}

impl fmt::Display for MonthStamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for MonthStamp {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SeriesError::StampFormat { text: s.to_string() };
        let (y, m) = s.split_once('-').ok_or_else(bad)?;
        let year: i32 = y.parse().map_err(|_| bad())?;
        let month: u32 = m.parse().map_err(|_| bad())?;
        MonthStamp::new(year, month).map_err(|_| bad())
    }
}

/// A gap-free monthly series: `values[i]` is stamped `start + i` months.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub start: MonthStamp,
    pub frequency: u32,
    pub values: Vec<f64>,
}

impl TimeSeries {
    /// Monthly series (frequency 12). Errors on empty input.
    pub fn new(start: MonthStamp, values: Vec<f64>) -> Result<Self, SeriesError> {
        Self::with_frequency(start, 12, values)
    }

    pub fn with_frequency(
        start: MonthStamp,
        frequency: u32,
        values: Vec<f64>,
    ) -> Result<Self, SeriesError> {
        if frequency < 2 {
            return Err(SeriesError::BadFrequency { frequency });
        }
        if values.is_empty() {
            return Err(SeriesError::EmptyInput);
        }
        Ok(TimeSeries { start, frequency, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn end(&self) -> MonthStamp {
        self.start.add_months(self.len() as i64 - 1)
    }

    pub fn stamp_at(&self, index: usize) -> MonthStamp {
        self.start.add_months(index as i64)
    }

    pub fn index_of(&self, stamp: MonthStamp) -> Result<usize, SeriesError> {
        let offset = stamp.months_since(self.start);
        if offset < 0 || offset >= self.len() as i64 {
            return Err(SeriesError::StampOutOfRange {
                stamp,
                start: self.start,
                end: self.end(),
            });
        }
        Ok(offset as usize)
    }

    /// Sub-series covering `from..=to`, both stamps inclusive.
    pub fn slice(&self, from: MonthStamp, to: MonthStamp) -> Result<TimeSeries, SeriesError> {
        if from > to {
            return Err(SeriesError::ReversedRange { from, to });
        }
        let lo = self.index_of(from)?;
        let hi = self.index_of(to)?;
        Ok(TimeSeries {
            start: from,
            frequency: self.frequency,
            values: self.values[lo..=hi].to_vec(),
        })
    }
}

/// Spread statistics of a raw sequence. `sd` is the sample standard
/// deviation (divisor n-1) and is absent for a single observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub mean_abs: f64,
    pub sd: Option<f64>,
}

/// Min / max / mean / mean of absolute values / sample SD of `values`.
pub fn summary(values: &[f64]) -> Result<SummaryStats, SeriesError> {
    if values.is_empty() {
        return Err(SeriesError::EmptyInput);
    }
    let n = values.len() as f64;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    let mut sum_abs = 0.0;
    for &v in values {
        min = min.min(v);
        max = max.max(v);
        sum += v;
        sum_abs += v.abs();
    }
    let mean = sum / n;
    let sd = if values.len() >= 2 {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        Some((ss / (n - 1.0)).sqrt())
    } else {
        None
    };
    Ok(SummaryStats { min, max, mean, mean_abs: sum_abs / n, sd })
}
