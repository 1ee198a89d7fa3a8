//! `tsfkit` — decompose, inspect, forecast, and evaluate monthly series from
//! the command line. Data goes to standard output (or `--output`),
//! diagnostics go to standard error, and every run is deterministic.

mod plot;

use std::error::Error;
use std::fs;
use std::path::PathBuf;
use std::process;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tsfkit::fixture::healthcare;
use tsfkit::io::{
    read_csv, read_plain, render_correlogram_csv, render_correlogram_json,
    render_decomposition_csv, render_decomposition_json, render_evaluation_csv,
    render_evaluation_json, render_forecast_csv, render_forecast_json,
};
use tsfkit::{
    acf, arima_forecast, auto_order, compare, css_fit, decompose, difference, hw_fit, hw_forecast,
    ols_extrapolate, ols_fit, pacf, run_method, ArimaOrder, ForecastResult, Method, MonthStamp,
    SmoothingSpec, TimeSeries,
};

#[derive(Parser)]
#[command(
    name = "tsfkit",
    version,
    about = "Decompose, inspect, forecast, and evaluate monthly time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a series into trend, seasonal, and random components
    Decompose {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Autocorrelation and partial autocorrelation tables
    Correlogram {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Largest lag to report
        #[arg(long, default_value_t = 24)]
        max_lag: usize,
        /// Difference the series this many times first
        #[arg(long, default_value_t = 0)]
        diff: usize,
        /// Restrict to the window ending here (default: whole series)
        #[arg(long)]
        train_end: Option<MonthStamp>,
    },
    /// Fit one model and forecast ahead
    Forecast {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Model to fit
        #[arg(long, value_enum)]
        method: ModelKind,
        /// ARIMA order as p,d,q (only with --method arima)
        #[arg(long)]
        order: Option<ArimaOrder>,
        /// Months to forecast
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
        horizon: u64,
        /// Fit on the window ending here (default: whole series)
        #[arg(long)]
        train_end: Option<MonthStamp>,
    },
    /// Run the six-method out-of-sample comparison
    Evaluate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Comma-separated subset of I..VI
        #[arg(long, default_value = "I,II,III,IV,V,VI")]
        methods: String,
        /// Last training month; the twelve months after it are scored
        /// (default: hold out the final year)
        #[arg(long)]
        train_end: Option<MonthStamp>,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Path to a date,value CSV or a plain list of values, or "fixture" for
    /// the embedded healthcare index
    #[arg(long, default_value = "fixture")]
    input: String,
    /// First month (YYYY-MM) of a plain value list
    #[arg(long)]
    start: Option<MonthStamp>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the table here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also render an SVG chart to this path
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    /// Holt-Winters (level, trend, seasonal)
    Hw,
    /// Holt (level, trend)
    Holt,
    /// Least-squares line
    Ols,
    /// ARIMA at an explicit order
    Arima,
    /// ARIMA at the automatically selected order
    AutoArima,
}

type CliResult = Result<(), Box<dyn Error>>;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        process::exit(1);
    }
}

fn load_series(args: &InputArgs) -> Result<TimeSeries, Box<dyn Error>> {
    if args.input == "fixture" {
        if args.start.is_some() {
            return Err("--start cannot be combined with the embedded fixture".into());
        }
        return Ok(healthcare());
    }
    let text = fs::read_to_string(&args.input)
        .map_err(|e| format!("cannot read {}: {e}", args.input))?;
    if args.input.ends_with(".csv") {
        if args.start.is_some() {
            return Err("--start is only for plain input; CSV rows carry their own dates".into());
        }
        Ok(read_csv(&text)?)
    } else {
        let start = args
            .start
            .ok_or("plain input needs --start YYYY-MM for its first value")?;
        Ok(read_plain(&text, start)?)
    }
}

fn trim(series: &TimeSeries, train_end: Option<MonthStamp>) -> Result<TimeSeries, Box<dyn Error>> {
    match train_end {
        Some(end) => Ok(series.slice(series.start, end)?),
        None => Ok(series.clone()),
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> CliResult {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_plot(svg: Option<String>, plot: Option<&PathBuf>) -> CliResult {
    if let (Some(svg), Some(path)) = (svg, plot) {
        fs::write(path, svg).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Decompose { input, out } => {
            let series = load_series(&input)?;
            let dec = decompose(&series)?;
            let text = match out.format {
                Format::Csv => render_decomposition_csv(&dec),
                Format::Json => render_decomposition_json(&dec),
            };
            emit(&text, out.output.as_ref())?;
            emit_plot(
                out.plot.as_ref().map(|_| plot::decomposition_svg(&dec)),
                out.plot.as_ref(),
            )
        }
        Command::Correlogram {
            input,
            out,
            max_lag,
            diff,
            train_end,
        } => {
            let series = trim(&load_series(&input)?, train_end)?;
            let values = difference(&series.values, diff)?;
            let a = acf(&values, max_lag)?;
            let p = pacf(&values, max_lag)?;
            let text = match out.format {
                Format::Csv => render_correlogram_csv(values.len(), &a, &p),
                Format::Json => render_correlogram_json(values.len(), &a, &p),
            };
            emit(&text, out.output.as_ref())?;
            emit_plot(
                out.plot
                    .as_ref()
                    .map(|_| plot::correlogram_svg(values.len(), &a, &p)),
                out.plot.as_ref(),
            )
        }
        Command::Forecast {
            input,
            out,
            method,
            order,
            horizon,
            train_end,
        } => {
            let train = trim(&load_series(&input)?, train_end)?;
            let horizon = horizon as usize;
            if order.is_some() && !matches!(method, ModelKind::Arima) {
                return Err("--order is only valid with --method arima".into());
            }
            let fc: ForecastResult = match method {
                ModelKind::Hw => {
                    let model = hw_fit(&train, SmoothingSpec::holt_winters(train.frequency))?;
                    hw_forecast(&model, horizon)
                }
                ModelKind::Holt => {
                    let model = hw_fit(&train, SmoothingSpec::holt())?;
                    hw_forecast(&model, horizon)
                }
                ModelKind::Ols => {
                    let line = ols_fit(&train.values)?;
                    ForecastResult::new(train.end(), ols_extrapolate(&line, train.len(), horizon))
                }
                ModelKind::Arima => {
                    let order = order.ok_or("--method arima needs --order p,d,q")?;
                    arima_forecast(&css_fit(&train, order)?, horizon)
                }
                ModelKind::AutoArima => {
                    let order = auto_order(&train)?;
                    arima_forecast(&css_fit(&train, order)?, horizon)
                }
            };
            let text = match out.format {
                Format::Csv => render_forecast_csv(&fc),
                Format::Json => render_forecast_json(&fc),
            };
            emit(&text, out.output.as_ref())?;
            emit_plot(
                out.plot.as_ref().map(|_| plot::forecast_svg(&train, &fc)),
                out.plot.as_ref(),
            )
        }
        Command::Evaluate {
            input,
            out,
            methods,
            train_end,
        } => {
            let series = load_series(&input)?;
            let train_end = train_end.unwrap_or_else(|| series.end().add_months(-12));
            let mut picked: Vec<Method> = methods
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(str::parse)
                .collect::<Result<_, _>>()?;
            if picked.is_empty() {
                return Err("--methods selected nothing".into());
            }
            picked.sort();
            picked.dedup();
            let reports = picked
                .iter()
                .map(|&m| run_method(&series, m, train_end))
                .collect::<Result<Vec<_>, _>>()?;
            let cmp = compare(&reports)?;
            let text = match out.format {
                Format::Csv => render_evaluation_csv(&reports, &cmp),
                Format::Json => render_evaluation_json(&reports, &cmp),
            };
            emit(&text, out.output.as_ref())?;
            emit_plot(
                out.plot.as_ref().map(|_| plot::evaluation_svg(&reports)),
                out.plot.as_ref(),
            )
        }
    }
}
