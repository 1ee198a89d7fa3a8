//! Shared forecast output types used by every method.

use crate::series::MonthStamp;

/// One forecast month: the calendar stamp and the predicted value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForecastPoint {
    pub stamp: MonthStamp,
    pub value: f64,
}

/// A forecast path produced from a training window ending at `origin`.
///
/// `points[0]` is the one-step-ahead month (the month after `origin`), and
/// the path continues for `horizon` consecutive months.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastResult {
    /// Last month of the training window the forecast was issued from.
    pub origin: MonthStamp,
    pub horizon: usize,
    pub points: Vec<ForecastPoint>,
}

impl ForecastResult {
    pub fn new(origin: MonthStamp, values: Vec<f64>) -> Self {
        let points = values
            .into_iter()
            .enumerate()
            .map(|(h, value)| ForecastPoint {
                stamp: origin.add_months(h as i64 + 1),
                value,
            })
            .collect::<Vec<_>>();
        ForecastResult {
            origin,
            horizon: points.len(),
            points,
        }
    }

    /// Just the predicted values, in horizon order.
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }
}
