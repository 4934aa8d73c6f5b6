//! Command-line front-end: parse a JSON experiment config, dispatch a
//! sweep (or a single estimation run), write the result table as CSV, and
//! print a reproducibility summary.
//!
//! Exit codes: 0 success, 2 configuration/usage errors, 3 numeric
//! failures, 4 I/O errors.

mod config;
mod csv;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use onebit_doa::{
    approx_error_sweep, correlation_table, single_estimate, sweep_separation, sweep_snapshots,
    sweep_snr, EstimatorVariant, ExperimentConfig, Metric, MetricRow, MetricTable,
    SourceScenario,
};

use crate::config::{parse_config, resolve, ConfigFile};
use crate::csv::emit_csv;

/// Error classes, one exit code each.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Numeric(msg) => write!(f, "numeric error: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl From<onebit_doa::Error> for CliError {
    fn from(err: onebit_doa::Error) -> Self {
        match err {
            onebit_doa::Error::Numeric(msg) => CliError::Numeric(msg),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "onebit-doa",
    version,
    about = "One-bit DOA estimation experiments: MUSIC on one-bit, reconstructed, \
             and unquantized covariance matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON experiment config; all keys optional, defaults mirror the
    /// 10-element ULA scenario with sources at -10 and 3.5 degrees.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output CSV path (default: `<subcommand>.csv`).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Master seed; takes precedence over the config file.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Spectrum search step in degrees; takes precedence over the config file.
    #[arg(long, global = true, value_name = "DEG")]
    grid_step: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one seeded estimation, print the peak angles, write the spectrum.
    Estimate {
        /// Per-source SNR in dB (noise power is 1).
        #[arg(long, default_value_t = 0.0)]
        snr_db: f64,
        /// Number of snapshots.
        #[arg(long, default_value_t = 1000)]
        snapshots: usize,
        /// Covariance path: one-bit-music, recon-one-bit-music, or
        /// unquantized-music.
        #[arg(long, default_value = "one-bit-music")]
        variant: EstimatorVariant,
    },
    /// Monte-Carlo RMSE versus SNR, one curve per (variant, snapshot count).
    SweepSnr,
    /// Monte-Carlo RMSE versus snapshot count, one curve per (variant, SNR).
    SweepSnapshots,
    /// Monte-Carlo resolution probability versus angular separation.
    SweepSeparation,
    /// Deterministic approximation error of the scaled-identity surrogate
    /// versus SNR.
    ApproxError,
    /// Analytic correlation coefficient of a sensor pair versus SNR.
    CorrVsSnr {
        /// First sensor of the pair (1-based).
        #[arg(long, default_value_t = 1)]
        sensor_m: usize,
        /// Second sensor of the pair (1-based).
        #[arg(long, default_value_t = 2)]
        sensor_n: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Estimate { .. } => "estimate",
            Command::SweepSnr => "sweep-snr",
            Command::SweepSnapshots => "sweep-snapshots",
            Command::SweepSeparation => "sweep-separation",
            Command::ApproxError => "approx-error",
            Command::CorrVsSnr { .. } => "corr-vs-snr",
        }
    }

    fn default_out(&self) -> PathBuf {
        PathBuf::from(format!("{}.csv", self.name().replace('-', "_")))
    }
}

fn load_config(path: Option<&Path>) -> Result<ConfigFile, CliError> {
    match path {
        None => Ok(ConfigFile::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Io(format!("cannot read config {}: {e}", path.display()))
            })?;
            parse_config(&text)
        }
    }
}

fn scenario_summary(config: &ExperimentConfig) -> String {
    let positions = config.geometry.positions();
    let spacing_hint = if positions.len() >= 2 {
        format!(", first spacing {}λ", positions[1] - positions[0])
    } else {
        String::new()
    };
    format!(
        "M={} sensors{}; sources at {:?} deg; noise power 1",
        config.geometry.element_count(),
        spacing_hint,
        config.doas_deg
    )
}

fn spectrum_rows(variant: EstimatorVariant, spectrum: &onebit_doa::SpectrumGrid) -> MetricTable {
    let rows: Vec<MetricRow> = spectrum
        .angles_deg()
        .iter()
        .zip(spectrum.values())
        .map(|(&theta, &value)| MetricRow {
            sweep_var: "theta_deg",
            sweep_value: theta,
            variant: variant.label().to_string(),
            metric: Metric::Spectrum,
            value,
            trials: 1,
            stderr: 0.0,
        })
        .collect();
    MetricTable { rows }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let started = Instant::now();
    let file = load_config(cli.config.as_deref())?;
    let config = resolve(&file, cli.seed, cli.grid_step)?;
    let out_path = cli
        .out
        .clone()
        .unwrap_or_else(|| cli.command.default_out());

    let table = match &cli.command {
        Command::Estimate {
            snr_db,
            snapshots,
            variant,
        } => {
            let scenario = SourceScenario::equal_power(config.doas_deg.clone(), *snr_db)?;
            let grid = onebit_doa::grid_with_step(config.grid_step_deg)?;
            let (peaks, spectrum) = single_estimate(
                &config.geometry,
                &scenario,
                *snapshots,
                *variant,
                &grid,
                config.seed,
            )?;
            let rendered: Vec<String> = peaks.iter().map(|p| format!("{p:.4}")).collect();
            println!(
                "estimated DOAs (deg, {variant}, {snr_db} dB, N={snapshots}): {}",
                rendered.join(", ")
            );
            spectrum_rows(*variant, &spectrum)
        }
        Command::SweepSnr => sweep_snr(&config)?,
        Command::SweepSnapshots => sweep_snapshots(&config)?,
        Command::SweepSeparation => sweep_separation(&config)?,
        Command::ApproxError => {
            approx_error_sweep(&config.geometry, &config.doas_deg, &config.snr_grid_db)?
        }
        Command::CorrVsSnr { sensor_m, sensor_n } => {
            let m = config.geometry.element_count();
            for (flag, value) in [("sensor-m", *sensor_m), ("sensor-n", *sensor_n)] {
                if value == 0 || value > m {
                    return Err(CliError::Config(format!(
                        "--{flag} {value} out of range 1..={m}"
                    )));
                }
            }
            correlation_table(
                &config.geometry,
                &config.doas_deg,
                sensor_m - 1,
                sensor_n - 1,
                &config.snr_grid_db,
            )?
        }
    };

    emit_csv(&table, &out_path)?;

    println!("scenario: {}", scenario_summary(&config));
    println!("seed: {}", config.seed);
    println!("wrote: {} ({} rows)", out_path.display(), table.rows.len());
    println!("wall time: {:.3} s", started.elapsed().as_secs_f64());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
