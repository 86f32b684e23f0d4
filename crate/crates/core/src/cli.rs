//! Argument model and dispatch for the `camg` binary.
//!
//! Every subcommand renders to a string (JSON or CSV) so the same code path is
//! exercised by the binary and by tests. Exit codes: `0` success, `2`
//! validation failure (bad arguments, failed cyclic check, no coordination),
//! `3` protocol deviation or day-cap hit.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::asymptotics::{alpha_closed_form, oscillation_profile, MIN_PROFILE_SAMPLES};
use crate::error::{AnalysisError, ModelError, SimError};
use crate::exact::{linear_fit, ExactTimeTable};
use crate::model::GameConfig;
use crate::sim::{
    run_baseline, run_episode, run_monte_carlo, validate_cyclic, DEFAULT_MAX_ROUNDS, DEFAULT_READJUST_PROB,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_DEVIATION: i32 = 3;

/// Default upper end of the small-`n` least-squares fit.
pub const DEFAULT_FIT_MAX: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "camg", version, about = "Co-action minority game: protocol simulation and exact analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact T_n table with least-squares fits.
    Exact(ExactArgs),
    /// Monte Carlo statistics of stage durations.
    Simulate(SimulateArgs),
    /// Sampled log-periodic profile of H* with its amplitude.
    Oscillations(OscillationArgs),
    /// Play the cyclic schedule and audit payoffs.
    ValidateCycle(CycleArgs),
    /// Random phase-shift baseline.
    Baseline(BaselineArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ExactArgs {
    #[arg(long = "n-max", default_value_t = 30)]
    pub n_max: usize,
    #[arg(long = "fit-min", default_value_t = 1)]
    pub fit_min: usize,
    /// Defaults to min(30, n-max).
    #[arg(long = "fit-max")]
    pub fit_max: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long = "N")]
    pub n_big: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct OscillationArgs {
    #[arg(long, default_value_t = 1024)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CycleArgs {
    #[arg(long = "N")]
    pub n_big: u64,
    /// Defaults to two periods.
    #[arg(long)]
    pub horizon: Option<u64>,
    /// Seed of the episode whose IDs drive the schedule.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct BaselineArgs {
    #[arg(long = "N")]
    pub n_big: u64,
    #[arg(long = "readjust-prob", default_value_t = DEFAULT_READJUST_PROB)]
    pub readjust_prob: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "max-rounds", default_value_t = DEFAULT_MAX_ROUNDS)]
    pub max_rounds: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub exit_code: i32,
    pub message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        CliError { exit_code: EXIT_VALIDATION, message: message.into() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        let exit_code = match e {
            SimError::Protocol(_)
            | SimError::DayCapExceeded { .. }
            | SimError::ConsensusBroken { .. }
            | SimError::IdMismatch { .. } => EXIT_DEVIATION,
            _ => EXIT_VALIDATION,
        };
        CliError { exit_code, message: e.to_string() }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::validation(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::validation(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::validation(e.to_string())
    }
}

/// A rendered report plus the exit code it should produce. A report can be
/// complete and still signal failure (a cyclic check with violations).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub body: String,
    pub exit_code: i32,
}

impl Report {
    fn ok(body: String) -> Self {
        Report { body, exit_code: EXIT_OK }
    }
}

pub fn render(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Exact(a) => cmd_exact(a, cli.format),
        Command::Simulate(a) => cmd_simulate(a, cli.format),
        Command::Oscillations(a) => cmd_oscillations(a, cli.format),
        Command::ValidateCycle(a) => cmd_validate_cycle(a, cli.format),
        Command::Baseline(a) => cmd_baseline(a, cli.format),
    }
}

/// Renders, writes to `--out` or stdout, reports errors on stderr and returns
/// the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    let report = match render(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code;
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &report.body),
        None => std::io::stdout().write_all(report.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_VALIDATION;
    }
    report.exit_code
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn csv_string<F>(header: &[&str], fill: F) -> Result<String, CliError>
where
    F: FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> Result<(), csv::Error>,
{
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header)?;
        fill(&mut w)?;
        w.flush().map_err(csv::Error::from)?;
    }
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

pub fn cmd_exact(args: &ExactArgs, format: Format) -> Result<Report, CliError> {
    let table = ExactTimeTable::compute(args.n_max);
    let fit_max = args.fit_max.unwrap_or(DEFAULT_FIT_MAX.min(args.n_max));
    let fit = match linear_fit(&table, args.fit_min, fit_max) {
        Ok((slope, intercept)) => {
            json!({"n_min": args.fit_min, "n_max": fit_max, "slope": slope, "intercept": intercept})
        }
        Err(e) => json!({"refused": e.to_string()}),
    };
    let tail_min = args.n_max / 2;
    let tail = match linear_fit(&table, tail_min.max(2), args.n_max) {
        Ok((slope, intercept)) if args.n_max >= 4 => {
            json!({"n_min": tail_min.max(2), "n_max": args.n_max, "slope": slope, "intercept": intercept})
        }
        _ => Value::Null,
    };
    let body = match format {
        Format::Json => {
            let rows: Vec<Value> = table
                .values()
                .iter()
                .enumerate()
                .map(|(n, v)| {
                    json!({
                        "n": n,
                        "numerator": v.numer().to_string(),
                        "denominator": v.denom().to_string(),
                        "value": table.as_f64(n),
                    })
                })
                .collect();
            to_json(&json!({"table": rows, "fit": fit, "tail_fit": tail}))
        }
        Format::Csv => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            let mut s = String::from_utf8(buf).expect("csv output is utf-8");
            for (name, f) in [("fit", &fit), ("tail_fit", &tail)] {
                if let Some(obj) = f.as_object() {
                    let fields: Vec<String> = obj.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    s.push_str(&format!("# {name} {}\n", fields.join(" ")));
                }
            }
            s
        }
    };
    Ok(Report::ok(body))
}

pub fn cmd_simulate(args: &SimulateArgs, format: Format) -> Result<Report, CliError> {
    let config = GameConfig::new(args.n_big, args.seed)?;
    if args.trials == 0 {
        return Err(CliError::validation("--trials must be at least 1"));
    }
    let report = run_monte_carlo(&config, args.trials)?;
    let body = match format {
        Format::Json => to_json(&serde_json::to_value(&report).expect("report serializes")),
        Format::Csv => {
            let mut rows =
                vec![("stage_one", String::new(), &report.stage_one), ("stage_two", String::new(), &report.stage_two)];
            for (size, s) in &report.per_set_size {
                rows.push(("set_split", size.to_string(), s));
            }
            csv_string(&["quantity", "set_size", "trials", "mean", "std_error"], |w| {
                for (q, size, s) in rows {
                    w.write_record([
                        q.to_string(),
                        size,
                        s.trials.to_string(),
                        s.mean.to_string(),
                        s.std_error.to_string(),
                    ])?;
                }
                Ok(())
            })?
        }
    };
    Ok(Report::ok(body))
}

pub fn cmd_oscillations(args: &OscillationArgs, format: Format) -> Result<Report, CliError> {
    if args.samples < MIN_PROFILE_SAMPLES {
        return Err(CliError::validation(format!("--samples must be at least {MIN_PROFILE_SAMPLES}")));
    }
    let profile = oscillation_profile(args.samples)?;
    let alpha = alpha_closed_form();
    let body = match format {
        Format::Json => {
            let rows: Vec<Value> = profile.samples.iter().map(|(x, v)| json!({"log2_y": x, "h_star": v})).collect();
            to_json(&json!({
                "samples": args.samples,
                "mean": profile.mean,
                "amplitude_dft": profile.amplitude,
                "amplitude_minmax": profile.amplitude_minmax,
                "alpha_closed_form": alpha,
                "profile": rows,
            }))
        }
        Format::Csv => {
            let mut buf = Vec::new();
            profile.write_csv(&mut buf)?;
            let mut s = String::from_utf8(buf).expect("csv output is utf-8");
            s.push_str(&format!(
                "# mean={:.17} amplitude_dft={:e} amplitude_minmax={:e} alpha_closed_form={:e}\n",
                profile.mean, profile.amplitude, profile.amplitude_minmax, alpha
            ));
            s
        }
    };
    Ok(Report::ok(body))
}

pub fn cmd_validate_cycle(args: &CycleArgs, format: Format) -> Result<Report, CliError> {
    let config = GameConfig::new(args.n_big, args.seed)?;
    let horizon = args.horizon.unwrap_or(2 * config.n_agents());
    let episode = run_episode(&config, 0)?;
    let report = validate_cyclic(&config, &episode.ids, horizon)?;
    let body = match format {
        Format::Json => to_json(&json!({
            "n_big": report.n_big,
            "horizon": report.horizon,
            "ids": episode.ids.iter().map(|id| id.value()).collect::<Vec<_>>(),
            "attendance_a": report.attendance_a,
            "wins_per_period": report.wins_per_period,
            "exact_per_period": report.exact_per_period,
            "window_violation_count": report.window_violations.len(),
            "window_violations": report.window_violations,
        })),
        Format::Csv => {
            let mut s = csv_string(&["agent", "id", "period", "wins"], |w| {
                for (i, periods) in report.wins_per_period.iter().enumerate() {
                    for (p, wins) in periods.iter().enumerate() {
                        w.write_record([
                            i.to_string(),
                            episode.ids[i].value().to_string(),
                            (p + 1).to_string(),
                            wins.to_string(),
                        ])?;
                    }
                }
                Ok(())
            })?;
            s.push_str(&format!(
                "# exact_per_period={} window_violation_count={}\n",
                report.exact_per_period,
                report.window_violations.len()
            ));
            s
        }
    };
    let exit_code = if report.is_clean() { EXIT_OK } else { EXIT_VALIDATION };
    Ok(Report { body, exit_code })
}

pub fn cmd_baseline(args: &BaselineArgs, format: Format) -> Result<Report, CliError> {
    let config = GameConfig::new(args.n_big, args.seed)?;
    let report = run_baseline(&config, args.readjust_prob, args.max_rounds, args.trials)?;
    let body = match format {
        Format::Json => to_json(&serde_json::to_value(&report).expect("report serializes")),
        Format::Csv => csv_string(
            &[
                "n_big",
                "readjust_prob",
                "max_rounds",
                "trials",
                "coordinated",
                "mean_periods",
                "std_error",
                "timeouts",
                "days_lower_bound",
            ],
            |w| {
                let (coordinated, mean, se) = match &report.periods {
                    Some(p) => (p.trials.to_string(), p.mean.to_string(), p.std_error.to_string()),
                    None => ("0".into(), String::new(), String::new()),
                };
                w.write_record([
                    report.n_big.to_string(),
                    report.readjust_prob.to_string(),
                    report.max_rounds.to_string(),
                    report.trials.to_string(),
                    coordinated,
                    mean,
                    se,
                    report.timeouts.to_string(),
                    report.days_lower_bound.to_string(),
                ])
            },
        )?,
    };
    Ok(Report::ok(body))
}
