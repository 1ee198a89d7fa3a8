//! Text input and output: the two accepted input formats (plain values and
//! `date,value` CSV) and deterministic CSV/JSON renderers for every result
//! type. Rendered numbers carry four decimal places; rendering the same value
//! twice yields identical bytes. Output lines end with `\n`; CSV input may
//! arrive with `\r\n` endings.

use thiserror::Error;

use crate::arima::{significance_band, CorrelogramPoint};
use crate::decompose::Decomposition;
use crate::evaluate::{Comparison, MethodReport};
use crate::forecast::ForecastResult;
use crate::series::{MonthStamp, SeriesError, TimeSeries};

#[derive(Debug, Error, PartialEq)]
pub enum IoError {
    #[error("token {index} ({token:?}) is not a finite number")]
    BadToken { index: usize, token: String },
    #[error("input contains no observations")]
    Empty,
    #[error("expected header \"date,value\", found {found:?}")]
    Header { found: String },
    #[error("line {line}: malformed row {text:?}")]
    Row { line: usize, text: String },
    #[error("line {line}: {text:?} is not a finite number")]
    Value { line: usize, text: String },
    #[error("rows must advance month by month: expected {expected}, got {got}")]
    Continuity { expected: MonthStamp, got: MonthStamp },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Parse whitespace-separated values into a monthly series beginning at
/// `start`.
pub fn read_plain(text: &str, start: MonthStamp) -> Result<TimeSeries, IoError> {
    let mut values = Vec::new();
    for (i, token) in text.split_whitespace().enumerate() {
        let parsed: Option<f64> = token.parse().ok().filter(|v: &f64| v.is_finite());
        match parsed {
            Some(v) => values.push(v),
            None => {
                return Err(IoError::BadToken {
                    index: i + 1,
                    token: token.to_string(),
                })
            }
        }
    }
    if values.is_empty() {
        return Err(IoError::Empty);
    }
    Ok(TimeSeries::new(start, values)?)
}

/// Parse a `date,value` CSV with `YYYY-MM` stamps into a monthly series.
/// Rows must advance month by month with no gaps; blank lines are skipped.
pub fn read_csv(text: &str) -> Result<TimeSeries, IoError> {
    let mut saw_header = false;
    let mut start: Option<MonthStamp> = None;
    let mut prev: Option<MonthStamp> = None;
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim_end_matches('\r');
        if row.trim().is_empty() {
            continue;
        }
        if !saw_header {
            if row != "date,value" {
                return Err(IoError::Header {
                    found: row.to_string(),
                });
            }
            saw_header = true;
            continue;
        }
        let mut fields = row.split(',');
        let (Some(ds), Some(vs), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(IoError::Row {
                line,
                text: row.to_string(),
            });
        };
        let stamp: MonthStamp = ds.trim().parse().map_err(|_| IoError::Row {
            line,
            text: row.to_string(),
        })?;
        let value: f64 = vs
            .trim()
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| IoError::Value {
                line,
                text: vs.trim().to_string(),
            })?;
        if let Some(p) = prev {
            let expected = p.add_months(1);
            if stamp != expected {
                return Err(IoError::Continuity {
                    expected,
                    got: stamp,
                });
            }
        } else {
            start = Some(stamp);
        }
        prev = Some(stamp);
        values.push(value);
    }
    if !saw_header && values.is_empty() && text.trim().is_empty() {
        return Err(IoError::Empty);
    }
    if !saw_header {
        return Err(IoError::Header {
            found: String::new(),
        });
    }
    let start = start.ok_or(IoError::Empty)?;
    Ok(TimeSeries::new(start, values)?)
}

fn fmt4(v: f64) -> String {
    format!("{v:.4}")
}

fn opt4_csv(v: Option<f64>) -> String {
    v.map(fmt4).unwrap_or_default()
}

fn opt4_json(v: Option<f64>) -> String {
    v.map(fmt4).unwrap_or_else(|| "null".to_string())
}

/// Render a series back to the `date,value` CSV format.
pub fn render_series_csv(series: &TimeSeries) -> String {
    let mut out = String::from("date,value\n");
    for (i, v) in series.values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", series.stamp_at(i), fmt4(*v)));
    }
    out
}

pub fn render_decomposition_csv(dec: &Decomposition) -> String {
    let mut out = String::from("stamp,observed,trend,seasonal,random\n");
    for (i, v) in dec.source.values.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            dec.source.stamp_at(i),
            fmt4(*v),
            opt4_csv(dec.trend[i]),
            fmt4(dec.seasonal[i]),
            opt4_csv(dec.random[i]),
        ));
    }
    out
}

pub fn render_decomposition_json(dec: &Decomposition) -> String {
    let figures = dec
        .seasonal_figures
        .iter()
        .map(|f| fmt4(*f))
        .collect::<Vec<_>>()
        .join(",");
    let rows = dec
        .source
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            format!(
                "{{\"stamp\":\"{}\",\"observed\":{},\"trend\":{},\"seasonal\":{},\"random\":{}}}",
                dec.source.stamp_at(i),
                fmt4(*v),
                opt4_json(dec.trend[i]),
                fmt4(dec.seasonal[i]),
                opt4_json(dec.random[i]),
            )
        })
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "{{\"start\":\"{}\",\"frequency\":{},\"figures\":[{}],\"rows\":[{}]}}\n",
        dec.source.start, dec.source.frequency, figures, rows
    )
}

pub fn render_forecast_csv(fc: &ForecastResult) -> String {
    let mut out = String::from("stamp,forecast\n");
    for p in &fc.points {
        out.push_str(&format!("{},{}\n", p.stamp, fmt4(p.value)));
    }
    out
}

pub fn render_forecast_json(fc: &ForecastResult) -> String {
    let points = fc
        .points
        .iter()
        .map(|p| format!("{{\"stamp\":\"{}\",\"value\":{}}}", p.stamp, fmt4(p.value)))
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "{{\"origin\":\"{}\",\"horizon\":{},\"points\":[{}]}}\n",
        fc.origin, fc.horizon, points
    )
}

/// Render ACF and PACF bars side by side; `n` is the sample size behind them
/// and sets the significance band column.
pub fn render_correlogram_csv(n: usize, acf: &[CorrelogramPoint], pacf: &[CorrelogramPoint]) -> String {
    let band = significance_band(n);
    let mut out = String::from("kind,lag,value,band,significant\n");
    for (kind, points) in [("acf", acf), ("pacf", pacf)] {
        for p in points {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                kind,
                p.lag,
                fmt4(p.value),
                fmt4(band),
                p.significant
            ));
        }
    }
    out
}

pub fn render_correlogram_json(n: usize, acf: &[CorrelogramPoint], pacf: &[CorrelogramPoint]) -> String {
    let bars = |points: &[CorrelogramPoint]| {
        points
            .iter()
            .map(|p| {
                format!(
                    "{{\"lag\":{},\"value\":{},\"significant\":{}}}",
                    p.lag,
                    fmt4(p.value),
                    p.significant
                )
            })
            .collect::<Vec<_>>()
            .join(",")
    };
    format!(
        "{{\"n\":{},\"band\":{},\"acf\":[{}],\"pacf\":[{}]}}\n",
        n,
        fmt4(significance_band(n)),
        bars(acf),
        bars(pacf)
    )
}

pub fn render_method_report_csv(rep: &MethodReport) -> String {
    let mut out = format!("method,{}\n\nstamp,actual,forecast,pct_error\n", rep.method);
    for r in &rep.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.stamp,
            fmt4(r.actual),
            fmt4(r.forecast),
            fmt4(r.pct_error)
        ));
    }
    out.push_str(&format!(
        "\nmetric,value\nmin,{}\nmax,{}\nmean,{}\nsd,{}\nrmse,{}\n",
        fmt4(rep.min_err),
        fmt4(rep.max_err),
        fmt4(rep.mean_err),
        fmt4(rep.sd_err),
        fmt4(rep.rmse)
    ));
    out
}

fn method_report_json_value(rep: &MethodReport) -> String {
    let rows = rep
        .rows
        .iter()
        .map(|r| {
            format!(
                "{{\"stamp\":\"{}\",\"actual\":{},\"forecast\":{},\"pct_error\":{}}}",
                r.stamp,
                fmt4(r.actual),
                fmt4(r.forecast),
                fmt4(r.pct_error)
            )
        })
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "{{\"method\":\"{}\",\"rows\":[{}],\"summary\":{{\"min\":{},\"max\":{},\"mean\":{},\"sd\":{},\"rmse\":{}}}}}",
        rep.method,
        rows,
        fmt4(rep.min_err),
        fmt4(rep.max_err),
        fmt4(rep.mean_err),
        fmt4(rep.sd_err),
        fmt4(rep.rmse)
    )
}

pub fn render_method_report_json(rep: &MethodReport) -> String {
    format!("{}\n", method_report_json_value(rep))
}

pub fn render_evaluation_csv(reports: &[MethodReport], cmp: &Comparison) -> String {
    let mut out = String::new();
    for rep in reports {
        out.push_str(&render_method_report_csv(rep));
        out.push('\n');
    }
    out.push_str("comparison\nmethod,min,max,mean,sd,rmse\n");
    for r in &cmp.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.method,
            fmt4(r.min_err),
            fmt4(r.max_err),
            fmt4(r.mean_err),
            fmt4(r.sd_err),
            fmt4(r.rmse)
        ));
    }
    out.push_str(&format!("winner,{}\n", cmp.winner));
    out
}

pub fn render_evaluation_json(reports: &[MethodReport], cmp: &Comparison) -> String {
    let reps = reports
        .iter()
        .map(method_report_json_value)
        .collect::<Vec<_>>()
        .join(",");
    let rows = cmp
        .rows
        .iter()
        .map(|r| {
            format!(
                "{{\"method\":\"{}\",\"min\":{},\"max\":{},\"mean\":{},\"sd\":{},\"rmse\":{}}}",
                r.method,
                fmt4(r.min_err),
                fmt4(r.max_err),
                fmt4(r.mean_err),
                fmt4(r.sd_err),
                fmt4(r.rmse)
            )
        })
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "{{\"reports\":[{}],\"comparison\":{{\"rows\":[{}],\"winner\":\"{}\"}}}}\n",
        reps, rows, cmp.winner
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluate::{EvaluationRow, Method};
    use crate::fixture::healthcare;

    fn stamp(y: i32, m: u32) -> MonthStamp {
        MonthStamp::new(y, m).unwrap()
    }

    #[test]
    fn plain_parsing() {
        let ts = read_plain("4765 5102\n5316\t5288", stamp(2010, 1)).unwrap();
        assert_eq!(ts.values, vec![4765.0, 5102.0, 5316.0, 5288.0]);
        assert_eq!(ts.end(), stamp(2010, 4));

        assert_eq!(
            read_plain("1 2 abc", stamp(2010, 1)).unwrap_err(),
            IoError::BadToken {
                index: 3,
                token: "abc".into()
            }
        );
        assert!(matches!(
            read_plain("1 nan 3", stamp(2010, 1)).unwrap_err(),
            IoError::BadToken { index: 2, .. }
        ));
        assert_eq!(read_plain("  \n ", stamp(2010, 1)).unwrap_err(), IoError::Empty);
    }

    #[test]
    fn csv_parsing() {
        let ts = read_csv("date,value\n2010-01,4765\n2010-02,5102.5\n").unwrap();
        assert_eq!(ts.start, stamp(2010, 1));
        assert_eq!(ts.values, vec![4765.0, 5102.5]);

        // carriage returns and trailing blank lines are tolerated
        let crlf = read_csv("date,value\r\n2010-01,1\r\n2010-02,2\r\n\r\n").unwrap();
        assert_eq!(crlf.values, vec![1.0, 2.0]);
    }

    #[test]
    fn csv_rejects_bad_input() {
        assert_eq!(
            read_csv("month,value\n2010-01,1\n").unwrap_err(),
            IoError::Header {
                found: "month,value".into()
            }
        );
        assert_eq!(
            read_csv("date,value\n2010-01\n").unwrap_err(),
            IoError::Row {
                line: 2,
                text: "2010-01".into()
            }
        );
        assert_eq!(
            read_csv("date,value\n2010-13,4\n").unwrap_err(),
            IoError::Row {
                line: 2,
                text: "2010-13,4".into()
            }
        );
        assert_eq!(
            read_csv("date,value\n2010-01,four\n").unwrap_err(),
            IoError::Value {
                line: 2,
                text: "four".into()
            }
        );
        assert_eq!(
            read_csv("date,value\n2010-01,1\n2010-03,2\n").unwrap_err(),
            IoError::Continuity {
                expected: stamp(2010, 2),
                got: stamp(2010, 3)
            }
        );
        assert_eq!(read_csv("date,value\n").unwrap_err(), IoError::Empty);
        assert_eq!(read_csv("").unwrap_err(), IoError::Empty);
    }

    #[test]
    fn csv_round_trip_preserves_fixture() {
        let series = healthcare();
        let rendered = render_series_csv(&series);
        let back = read_csv(&rendered).unwrap();
        assert_eq!(back, series);
        // and rendering is byte-stable
        assert_eq!(rendered, render_series_csv(&back));
    }

    #[test]
    fn decomposition_rendering() {
        let dec = crate::decompose::decompose(&healthcare()).unwrap();
        let csv = render_decomposition_csv(&dec);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "stamp,observed,trend,seasonal,random");
        let first = lines.next().unwrap();
        // the first half-cycle has no trend or random component
        assert_eq!(first, "2010-01,4765.0000,,22.3032,");
        let july = csv
            .lines()
            .find(|l| l.starts_with("2010-07"))
            .unwrap()
            .to_string();
        assert_eq!(
            july,
            format!("2010-07,{:.4},5767.7500,27.6644,-198.4144", dec.source.values[6])
        );

        let json = render_decomposition_json(&dec);
        assert!(json.starts_with("{\"start\":\"2010-01\",\"frequency\":12,"));
        assert!(json.contains("\"trend\":null"));
        assert!(json.contains("\"trend\":5767.7500"));
        assert!(json.ends_with("}\n"));
    }

    #[test]
    fn forecast_rendering() {
        let fc = ForecastResult::new(stamp(2015, 12), vec![100.25, 101.0]);
        assert_eq!(
            render_forecast_csv(&fc),
            "stamp,forecast\n2016-01,100.2500\n2016-02,101.0000\n"
        );
        assert_eq!(
            render_forecast_json(&fc),
            "{\"origin\":\"2015-12\",\"horizon\":2,\"points\":[{\"stamp\":\"2016-01\",\"value\":100.2500},{\"stamp\":\"2016-02\",\"value\":101.0000}]}\n"
        );
    }

    #[test]
    fn correlogram_rendering() {
        let acf = vec![
            CorrelogramPoint {
                lag: 0,
                value: 1.0,
                significant: true,
            },
            CorrelogramPoint {
                lag: 1,
                value: -0.25,
                significant: false,
            },
        ];
        let pacf = vec![CorrelogramPoint {
            lag: 1,
            value: -0.25,
            significant: false,
        }];
        let csv = render_correlogram_csv(49, &acf, &pacf);
        assert_eq!(
            csv,
            "kind,lag,value,band,significant\n\
             acf,0,1.0000,0.2800,true\n\
             acf,1,-0.2500,0.2800,false\n\
             pacf,1,-0.2500,0.2800,false\n"
        );
        let json = render_correlogram_json(49, &acf, &pacf);
        assert!(json.starts_with("{\"n\":49,\"band\":0.2800,\"acf\":[{\"lag\":0,"));
        assert!(json.contains("\"pacf\":[{\"lag\":1,\"value\":-0.2500,\"significant\":false}]"));
    }

    fn sample_report() -> MethodReport {
        let rows = vec![
            EvaluationRow {
                stamp: stamp(2016, 1),
                actual: 100.0,
                forecast: 110.0,
                pct_error: 10.0,
            },
            EvaluationRow {
                stamp: stamp(2016, 2),
                actual: 200.0,
                forecast: 190.0,
                pct_error: -5.0,
            },
        ];
        let m = crate::evaluate::metrics(&rows).unwrap();
        MethodReport {
            method: Method::I,
            rows,
            min_err: m.min_err,
            max_err: m.max_err,
            mean_err: m.mean_err,
            sd_err: m.sd_err,
            rmse: m.rmse,
        }
    }

    #[test]
    fn method_report_rendering() {
        let rep = sample_report();
        assert_eq!(
            render_method_report_csv(&rep),
            "method,I\n\
             \n\
             stamp,actual,forecast,pct_error\n\
             2016-01,100.0000,110.0000,10.0000\n\
             2016-02,200.0000,190.0000,-5.0000\n\
             \n\
             metric,value\n\
             min,5.0000\n\
             max,10.0000\n\
             mean,7.5000\n\
             sd,3.5355\n\
             rmse,10.0000\n"
        );
        assert_eq!(
            render_method_report_json(&rep),
            "{\"method\":\"I\",\"rows\":[\
             {\"stamp\":\"2016-01\",\"actual\":100.0000,\"forecast\":110.0000,\"pct_error\":10.0000},\
             {\"stamp\":\"2016-02\",\"actual\":200.0000,\"forecast\":190.0000,\"pct_error\":-5.0000}],\
             \"summary\":{\"min\":5.0000,\"max\":10.0000,\"mean\":7.5000,\"sd\":3.5355,\"rmse\":10.0000}}\n"
        );
    }

    #[test]
    fn evaluation_rendering() {
        let rep = sample_report();
        let cmp = crate::evaluate::compare(std::slice::from_ref(&rep)).unwrap();
        let csv = render_evaluation_csv(&[rep.clone()], &cmp);
        assert!(csv.contains("method,I\n"));
        assert!(csv.contains("comparison\nmethod,min,max,mean,sd,rmse\n"));
        assert!(csv.ends_with("winner,I\n"));
        let json = render_evaluation_json(&[rep], &cmp);
        assert!(json.starts_with("{\"reports\":[{\"method\":\"I\""));
        assert!(json.ends_with("\"winner\":\"I\"}}\n"));
        assert!(json.contains("\"comparison\":{\"rows\":[{\"method\":\"I\","));
    }
}
