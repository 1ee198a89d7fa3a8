//! The embedded healthcare sector index dataset: 84 monthly aggregate values,
//! January 2010 through December 2016. This is the default input of the CLI
//! and the subject of the golden tests. Component columns (trend, seasonal,
//! random) are never embedded here — they are always derived.

use crate::series::{MonthStamp, TimeSeries};

pub const HEALTHCARE_START: MonthStamp = MonthStamp { year: 2010, month: 1 };

#[rustfmt::skip]
pub const HEALTHCARE_VALUES: [f64; 84] = [
    4765.0, 4913.0, 5328.0, 5345.0, 5490.0, 5749.0, 5597.0, 5544.0, 5996.0, 6433.0, 6583.0, 6734.0,
    6237.0, 5718.0, 6024.0, 6233.0, 6393.0, 6398.0, 6421.0, 5962.0, 5868.0, 6136.0, 6055.0, 5871.0,
    6336.0, 6336.0, 6626.0, 6796.0, 6645.0, 6884.0, 7142.0, 7496.0, 7528.0, 7620.0, 7946.0, 8132.0,
    8017.0, 7810.0, 8008.0, 8691.0, 8847.0, 8845.0, 9074.0, 8966.0, 9464.0, 9609.0, 9501.0, 9966.0,
    10110.0, 10840.0, 10084.0, 10757.0, 10315.0, 11462.0, 12341.0, 13357.0, 14352.0, 14354.0, 14957.0, 14693.0,
    15667.0, 15855.0, 17285.0, 16187.0, 16900.0, 16564.0, 17048.0, 17962.0, 17779.0, 18066.0, 16298.0, 16905.0,
    16305.0, 15208.0, 15149.0, 15582.0, 15246.0, 15493.0, 16299.0, 16162.0, 16181.0, 16472.0, 15734.0, 14728.0,
];

/// The full 84-month series as a [`TimeSeries`] starting 2010-01.
pub fn healthcare() -> TimeSeries {
    TimeSeries::new(HEALTHCARE_START, HEALTHCARE_VALUES.to_vec())
        .expect("fixture is non-empty by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_integrity() {
        let s = healthcare();
        assert_eq!(s.len(), 84);
        assert_eq!(s.values[0], 4765.0);
        assert_eq!(s.values[83], 14728.0);
        assert_eq!(s.end(), MonthStamp { year: 2016, month: 12 });
    }
}
