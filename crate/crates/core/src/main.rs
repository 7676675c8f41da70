#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use uavnet::mobility::ControlTessellation;
use uavnet::model::file::{load_config, LoadError};
use uavnet::montecarlo::write_dump;
use uavnet::sweep::{
    oracle_table, point_columns, point_row, Coupling, Evaluator, Format, OracleSettings, SweepSpec,
    SweepVariable, Table, DEFAULT_CHORDS,
};
use uavnet::{Error, Mode, NetworkConfig};

const EXIT_FAILURE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_NONCONVERGENCE: u8 = 3;

/// Coverage, rate, handover and throughput analysis of three-tier
/// macro/small/UAV networks.
#[derive(Parser)]
#[command(name = "uavnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a configuration file.
    Validate(Common),
    /// Evaluate a single operating point.
    Point {
        #[command(flatten)]
        common: Common,
        /// User velocity (m/s).
        #[arg(long, default_value_t = 0.0)]
        velocity: f64,
    },
    /// Sweep velocity, UAV intensity or SINR threshold.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "velocity")]
        variable: SweepVariable,
        /// Comma-separated values or start:stop:step, in the variable's unit
        /// (m/s, BS/km², dB). Defaults depend on the variable.
        #[arg(long)]
        grid: Option<String>,
        /// Tie terrestrial intensities to the UAV intensity as
        /// `MACRO_RATIO,SMALL_RATIO` (λ_m = MACRO_RATIO·λ_v, ...);
        /// `uav-led` means 0.5,1/3.
        #[arg(long)]
        coupling: Option<String>,
        /// Velocity (m/s) for sweeps over other variables.
        #[arg(long, default_value_t = 20.0)]
        velocity: f64,
        /// Comma-separated output columns to keep.
        #[arg(long)]
        outputs: Option<String>,
    },
    /// Compare analytic results with Monte Carlo estimates.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Trajectory velocity (m/s).
        #[arg(long, default_value_t = 20.0)]
        velocity: f64,
        #[arg(long, default_value_t = 200)]
        trajectories: usize,
        /// Trajectory length (m).
        #[arg(long, default_value_t = 20_000.0)]
        trajectory_length: f64,
        /// Write raw link samples (CSV) here.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Conventional,
    Split,
    Both,
}

impl ModeArg {
    fn modes(self) -> Vec<Mode> {
        match self {
            ModeArg::Conventional => vec![Mode::Conventional],
            ModeArg::Split => vec![Mode::Split],
            ModeArg::Both => Mode::ALL.to_vec(),
        }
    }
}

#[derive(Args)]
struct Common {
    /// TOML configuration; the built-in baseline when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "both")]
    mode: ModeArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Monte Carlo link samples (oracle).
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// Chords per boundary-intensity estimate.
    #[arg(long, default_value_t = DEFAULT_CHORDS)]
    chords: usize,
    /// Control tessellation of the split architecture: weighted or uav-only.
    #[arg(long, default_value = "weighted")]
    control: ControlTessellation,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: Format,
}

impl Common {
    fn evaluator(&self) -> Evaluator {
        Evaluator::new(self.chords, self.seed).with_control(self.control)
    }
}

/// Failure classified for the exit code.
#[derive(Debug)]
enum Failure {
    Invalid(anyhow::Error),
    NonConvergence(anyhow::Error),
    Other(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => EXIT_INVALID,
            Failure::NonConvergence(_) => EXIT_NONCONVERGENCE,
            Failure::Other(_) => EXIT_FAILURE,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Invalid(e) | Failure::NonConvergence(e) | Failure::Other(e) => e,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::NonConvergence(e.into())
        } else if matches!(e, Error::Config(_) | Error::Sweep(_)) {
            Failure::Invalid(e.into())
        } else {
            Failure::Other(e.into())
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn load(path: Option<&Path>) -> Result<NetworkConfig, Failure> {
    let cfg = match path {
        None => NetworkConfig::baseline(),
        Some(p) => load_config(p).map_err(|e| match e {
            LoadError::Parse { .. } => Failure::Invalid(e.into()),
            LoadError::Io { .. } => Failure::Other(e.into()),
        })?,
    };
    let origin = path.map_or_else(|| "baseline".to_string(), |p| p.display().to_string());
    cfg.validate().map_err(|e| Failure::Invalid(anyhow::Error::new(e).context(origin)))
}

fn emit(table: &Table, common: &Common) -> Result<()> {
    match &common.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            table.write(common.format, BufWriter::new(file))?;
        }
        None => table.write(common.format, io::stdout().lock())?,
    }
    Ok(())
}

fn parse_grid(text: &str) -> Result<Vec<f64>, Failure> {
    let invalid = |m: String| Failure::Invalid(anyhow::anyhow!(m));
    let number = |s: &str| {
        s.trim().parse::<f64>().map_err(|_| invalid(format!("invalid grid value `{}`", s.trim())))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (a, b, h) = (number(start)?, number(stop)?, number(step)?);
            if !(h > 0.0) || !(b >= a) {
                return Err(invalid(format!("invalid grid range `{text}`")));
            }
            let n = ((b - a) / h + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| a + h * i as f64).collect())
        }
        [_] => text.split(',').map(number).collect(),
        _ => Err(invalid(format!("invalid grid `{text}`"))),
    }
}

fn parse_coupling(text: &str) -> Result<Coupling, Failure> {
    if text.eq_ignore_ascii_case("uav-led") {
        return Ok(Coupling::UAV_LED);
    }
    let values: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Invalid(anyhow::anyhow!("invalid coupling `{text}`")))?;
    match values.as_slice() {
        [m, s] => Ok(Coupling { macro_ratio: *m, small_ratio: *s }),
        _ => Err(Failure::Invalid(anyhow::anyhow!("coupling needs two ratios, got `{text}`"))),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate(common) => {
            let cfg = load(common.config.as_deref())?;
            let mut out = io::stdout().lock();
            writeln!(out, "configuration is valid").map_err(anyhow::Error::from)?;
            writeln!(out, "fingerprint {:016x}", cfg.fingerprint()).map_err(anyhow::Error::from)?;
        }
        Command::Point { common, velocity } => {
            let cfg = load(common.config.as_deref())?;
            let ev = common.evaluator();
            let mut table = Table::new(point_columns(SweepVariable::Velocity));
            for mode in common.mode.modes() {
                let p = ev.run_point(&cfg, mode, velocity)?;
                table.rows.push(point_row(SweepVariable::Velocity, velocity, &p));
            }
            emit(&table, &common)?;
        }
        Command::Sweep { common, variable, grid, coupling, velocity, outputs } => {
            let cfg = load(common.config.as_deref())?;
            let mut spec = SweepSpec::new(variable).with_modes(common.mode.modes()).with_velocity(velocity);
            if let Some(g) = grid {
                spec = spec.with_grid(parse_grid(&g)?);
            }
            if let Some(c) = coupling {
                spec = spec.with_coupling(parse_coupling(&c)?);
            }
            spec.outputs = outputs.map(|o| o.split(',').map(|s| s.trim().to_string()).collect());
            let outcome = common.evaluator().run_sweep(&spec, &cfg)?;
            emit(&outcome.table, &common)?;
            if !outcome.is_complete() {
                let numerical = outcome.failures.iter().all(|f| f.error.is_numerical());
                let mut summary = format!("{} of {} sweep points failed:", outcome.failures.len(), spec.grid.len() * spec.modes.len());
                for f in &outcome.failures {
                    summary.push_str(&format!("\n  {f}"));
                }
                let err = anyhow::anyhow!(summary);
                return Err(if numerical { Failure::NonConvergence(err) } else { Failure::Other(err) });
            }
        }
        Command::Oracle { common, velocity, trajectories, trajectory_length, dump } => {
            let cfg = load(common.config.as_deref())?;
            let settings = OracleSettings {
                samples: common.samples,
                seed: common.seed,
                velocity,
                trajectories,
                trajectory_length,
            };
            let modes = common.mode.modes();
            let (table, batch) = oracle_table(&cfg, &common.evaluator(), &settings, &modes)?;
            emit(&table, &common)?;
            if let Some(path) = dump {
                let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                write_dump(&batch, modes[0], BufWriter::new(file))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            ExitCode::from(f.code())
        }
    }
}
