//! Hand-rolled SVG charts: stacked decomposition panels, ACF/PACF bar charts
//! with significance bands, forecast continuations, and per-method
//! actual-vs-predicted panels. Everything is static markup with fixed
//! two-decimal coordinates, so a rerun produces identical bytes.

use tsfkit::{significance_band, CorrelogramPoint, Decomposition, ForecastResult, MethodReport, TimeSeries};

const WIDTH: f64 = 880.0;
const PANEL_H: f64 = 170.0;
const MARGIN_X: f64 = 50.0;
const GAP: f64 = 42.0;

fn document(panels: usize, body: &str) -> String {
    let height = GAP + panels as f64 * (PANEL_H + GAP);
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {WIDTH:.0} {height:.0}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"{WIDTH:.0}\" height=\"{height:.0}\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

fn panel_top(index: usize) -> f64 {
    GAP + index as f64 * (PANEL_H + GAP)
}

/// One chart area: maps series index → x and value → y, and draws its own
/// chrome.
struct Frame {
    top: f64,
    min_v: f64,
    max_v: f64,
    n: usize,
}

impl Frame {
    fn new(index: usize, values: impl Iterator<Item = f64>, n: usize) -> Frame {
        let mut min_v = f64::INFINITY;
        let mut max_v = f64::NEG_INFINITY;
        for v in values {
            min_v = min_v.min(v);
            max_v = max_v.max(v);
        }
        if !min_v.is_finite() || !max_v.is_finite() {
            min_v = 0.0;
            max_v = 1.0;
        }
        let pad = ((max_v - min_v).abs()).max(1e-9) * 0.08;
        Frame {
            top: panel_top(index),
            min_v: min_v - pad,
            max_v: max_v + pad,
            n: n.max(2),
        }
    }

    fn x(&self, i: f64) -> f64 {
        MARGIN_X + (WIDTH - 2.0 * MARGIN_X) * i / (self.n - 1) as f64
    }

    fn y(&self, v: f64) -> f64 {
        self.top + PANEL_H - PANEL_H * (v - self.min_v) / (self.max_v - self.min_v)
    }

    fn chrome(&self, title: &str) -> String {
        format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{PANEL_H:.2}\" \
             fill=\"none\" stroke=\"#999\"/>\n\
             <text x=\"{:.2}\" y=\"{:.2}\">{title}</text>\n",
            MARGIN_X,
            self.top,
            WIDTH - 2.0 * MARGIN_X,
            MARGIN_X,
            self.top - 8.0,
        )
    }

    fn polyline(&self, points: &[(usize, f64)], color: &str, dashed: bool) -> String {
        if points.is_empty() {
            return String::new();
        }
        let coords = points
            .iter()
            .map(|&(i, v)| format!("{:.2},{:.2}", self.x(i as f64), self.y(v)))
            .collect::<Vec<_>>()
            .join(" ");
        let dash = if dashed { " stroke-dasharray=\"5,4\"" } else { "" };
        format!(
            "<polyline points=\"{coords}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash}/>\n"
        )
    }

    fn hline(&self, v: f64, color: &str, dashed: bool) -> String {
        let dash = if dashed { " stroke-dasharray=\"4,4\"" } else { "" };
        format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{color}\"{dash}/>\n",
            MARGIN_X,
            self.y(v),
            WIDTH - MARGIN_X,
            self.y(v)
        )
    }

    fn bar(&self, i: f64, v: f64, width: f64, color: &str) -> String {
        let zero = self.y(0.0);
        let yv = self.y(v);
        format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{color}\"/>\n",
            self.x(i) - width / 2.0,
            yv.min(zero),
            width,
            (yv - zero).abs().max(0.5),
        )
    }
}

/// Four stacked panels: observed, trend, seasonal, random.
pub fn decomposition_svg(dec: &Decomposition) -> String {
    let n = dec.source.len();
    let observed: Vec<(usize, f64)> = dec.source.values.iter().copied().enumerate().collect();
    let trend: Vec<(usize, f64)> = dec
        .trend
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|t| (i, t)))
        .collect();
    let seasonal: Vec<(usize, f64)> = dec.seasonal.iter().copied().enumerate().collect();
    let random: Vec<(usize, f64)> = dec
        .random
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|r| (i, r)))
        .collect();
    let panels = [
        ("observed", &observed, "#1f6fb4"),
        ("trend", &trend, "#b45a1f"),
        ("seasonal", &seasonal, "#2e8540"),
        ("random", &random, "#7248b4"),
    ];
    let mut body = String::new();
    for (idx, (title, points, color)) in panels.iter().enumerate() {
        let frame = Frame::new(idx, points.iter().map(|&(_, v)| v), n);
        body.push_str(&frame.chrome(title));
        if *title == "seasonal" || *title == "random" {
            body.push_str(&frame.hline(0.0, "#bbb", false));
        }
        body.push_str(&frame.polyline(points, color, false));
    }
    body.push_str(&format!(
        "<text x=\"{MARGIN_X:.2}\" y=\"{:.2}\">{} .. {}</text>\n",
        panel_top(4) - 14.0,
        dec.source.start,
        dec.source.end(),
    ));
    document(4, &body)
}

/// Two bar panels (ACF, PACF) with dashed ±1.96/√n band lines.
pub fn correlogram_svg(n_sample: usize, acf: &[CorrelogramPoint], pacf: &[CorrelogramPoint]) -> String {
    let band = significance_band(n_sample);
    let mut body = String::new();
    for (idx, (title, points)) in [("acf", acf), ("pacf", pacf)].iter().enumerate() {
        let extent = points
            .iter()
            .map(|p| p.value.abs())
            .fold(band, f64::max);
        let frame = Frame::new(
            idx,
            [-extent, extent].into_iter(),
            points.last().map_or(2, |p| p.lag + 1),
        );
        body.push_str(&frame.chrome(title));
        body.push_str(&frame.hline(0.0, "#bbb", false));
        body.push_str(&frame.hline(band, "#c03030", true));
        body.push_str(&frame.hline(-band, "#c03030", true));
        for p in *points {
            let color = if p.significant { "#1f3fb4" } else { "#9aa7d4" };
            body.push_str(&frame.bar(p.lag as f64, p.value, 7.0, color));
        }
    }
    document(2, &body)
}

/// History plus its forecast continuation in one panel.
pub fn forecast_svg(train: &TimeSeries, fc: &ForecastResult) -> String {
    let n = train.len() + fc.points.len();
    let history: Vec<(usize, f64)> = train.values.iter().copied().enumerate().collect();
    let mut future: Vec<(usize, f64)> = fc
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| (train.len() + i, p.value))
        .collect();
    if let Some(&(_, last)) = history.last() {
        future.insert(0, (train.len() - 1, last));
    }
    let frame = Frame::new(
        0,
        history.iter().chain(future.iter()).map(|&(_, v)| v),
        n,
    );
    let mut body = frame.chrome("forecast");
    body.push_str(&frame.polyline(&history, "#1f6fb4", false));
    body.push_str(&frame.polyline(&future, "#c03030", true));
    document(1, &body)
}

/// One panel per report: actuals solid, forecasts dashed.
pub fn evaluation_svg(reports: &[MethodReport]) -> String {
    let mut body = String::new();
    for (idx, rep) in reports.iter().enumerate() {
        let actual: Vec<(usize, f64)> = rep.rows.iter().map(|r| r.actual).enumerate().collect();
        let forecast: Vec<(usize, f64)> =
            rep.rows.iter().map(|r| r.forecast).enumerate().collect();
        let frame = Frame::new(
            idx,
            actual.iter().chain(forecast.iter()).map(|&(_, v)| v),
            rep.rows.len(),
        );
        let title = format!("Method {} (rmse {:.2})", rep.method, rep.rmse);
        body.push_str(&frame.chrome(&title));
        body.push_str(&frame.polyline(&actual, "#1f6fb4", false));
        body.push_str(&frame.polyline(&forecast, "#c03030", true));
    }
    document(reports.len(), &body)
}
