//! `casimir`: Casimir forces in a conducting cylindrical cavity.
//!
//! Exit status: 0 on success, 1 for usage or configuration errors, 2 when a
//! computation fails (numerical failure, I/O, unusable cache).

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use config::List;
use output::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

impl From<casimir_core::Error> for CliError {
    fn from(e: casimir_core::Error) -> Self {
        use casimir_core::Error as E;
        match e {
            E::InvalidParameter(_) | E::Range(_) | E::MissingCheckpoint(_) => CliError::Usage(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Compute(_) => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Count(usize),
}

impl FromStr for Threads {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(Threads::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Threads::Count(n)),
            _ => Err(format!("expected a positive integer or 'auto', got '{s}'")),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "casimir", version, about = "Casimir forces in a conducting cylindrical cavity")]
pub struct Cli {
    /// Worker threads: a positive integer or `auto`. Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<Threads>,
    /// Flat key=value file supplying defaults for any option.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory of the Bessel zero cache [default: $CASIMIR_ZERO_CACHE_DIR].
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Output format [default: csv].
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write data here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build or validate the Bessel zero cache and print a summary.
    Zeros(ZerosArgs),
    /// Dimensionless force sums (k, I_a, I_b) at truncation checkpoints.
    Table(TableArgs),
    /// Radial and axial forces in newtons, with the ratio to truncation k - 1.
    Force(ForceArgs),
    /// Limiting geometries.
    #[command(subcommand)]
    Asym(AsymCommand),
    /// Free-vacuum cutoff and plate energy.
    #[command(subcommand)]
    Vacuum(VacuumCommand),
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    /// Largest Bessel order m [default: 500].
    #[arg(long)]
    pub max_order: Option<u32>,
    /// Zeros per order [default: 500].
    #[arg(long)]
    pub max_index: Option<u32>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Aspect ratio a/b [default: 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Dimensionless cutoff y_p = u_p a. Excludes --a/--omega-p.
    #[arg(long)]
    pub y_p: Option<f64>,
    /// Radius in m, with --omega-p.
    #[arg(long)]
    pub a: Option<f64>,
    /// Plasma frequency in rad/s, with --a.
    #[arg(long)]
    pub omega_p: Option<f64>,
    /// Speed converting omega_p to a wavenumber [default: 3e8].
    #[arg(long)]
    pub cutoff_c: Option<f64>,
    /// Ascending truncation checkpoints [default: 10,50,100,...,450,499,500].
    #[arg(long)]
    pub checkpoints: Option<List<usize>>,
}

#[derive(Debug, Args)]
pub struct ForceArgs {
    /// Radius in m [default: 1e-7].
    #[arg(long)]
    pub a: Option<f64>,
    /// Height in m [default: 1e-7].
    #[arg(long)]
    pub b: Option<f64>,
    /// Plasma frequency in rad/s [default: 1e16].
    #[arg(long)]
    pub omega_p: Option<f64>,
    /// Cutoff wavenumber in 1/m. Excludes --omega-p.
    #[arg(long)]
    pub cutoff_wavenumber: Option<f64>,
    /// Speed converting omega_p to a wavenumber [default: 3e8].
    #[arg(long)]
    pub cutoff_c: Option<f64>,
    /// Truncation M = N = L [default: 500].
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum AsymCommand {
    /// Force per unit height of a long cylinder against radius.
    LongCylinder(LongCylinderArgs),
    /// Cutoff number and pressure of the parallel-plate limit.
    Plates(PlatesArgs),
}

#[derive(Debug, Args)]
pub struct LongCylinderArgs {
    /// Cutoff wavenumber in 1/m [default: 1e16/3e8].
    #[arg(long)]
    pub lambda_p: Option<f64>,
    /// Two-dimensional truncation M2 = N2 [default: 200].
    #[arg(long)]
    pub truncation: Option<u32>,
    /// Number of radii [default: 11].
    #[arg(long)]
    pub points: Option<usize>,
    /// Smallest radius in m [default: start of the power-law regime].
    #[arg(long)]
    pub a_min: Option<f64>,
    /// Largest radius in m [default: ten times a-min].
    #[arg(long)]
    pub a_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PlatesArgs {
    /// Cutoff values p [default: 0.1,0.5,1,2,5,10].
    #[arg(long)]
    pub p: Option<List<f64>>,
    /// Plate separation in m for the pressure table [default: 1e-7].
    #[arg(long)]
    pub b: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum VacuumCommand {
    /// Solve I(alpha) = 1.
    AlphaSolve,
    /// Free-vacuum energy, closed form and integral.
    FreeEnergy(FreeEnergyArgs),
    /// Energy per area between plates, by both routes.
    PlateEnergy(PlateEnergyArgs),
}

#[derive(Debug, Args)]
pub struct FreeEnergyArgs {
    /// Uncertainty constant [default: root of I(alpha) = 1].
    #[arg(long)]
    pub alpha_u: Option<f64>,
    /// Extent D of free space in m, or `inf` [default: 1e-6].
    #[arg(long)]
    pub extent: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PlateEnergyArgs {
    /// Plate separation in m [default: 1e-7].
    #[arg(long)]
    pub d: Option<f64>,
    /// Uncertainty constant [default: root of I(alpha) = 1].
    #[arg(long)]
    pub alpha_u: Option<f64>,
}

fn configure_threads(threads: Threads) -> Result<(), CliError> {
    #[cfg(feature = "parallel")]
    if let Threads::Count(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Compute(format!("cannot start {n} threads: {e}")))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => config::ConfigFile::load(path)?,
        None => config::ConfigFile::default(),
    };
    configure_threads(cli.threads.unwrap_or(Threads::Auto))?;
    let ctx = commands::Context::new(&cli, cfg)?;
    match &cli.command {
        Command::Zeros(args) => commands::zeros(&ctx, args),
        Command::Table(args) => commands::table(&ctx, args),
        Command::Force(args) => commands::force(&ctx, args),
        Command::Asym(AsymCommand::LongCylinder(args)) => commands::long_cylinder(&ctx, args),
        Command::Asym(AsymCommand::Plates(args)) => commands::plates(&ctx, args),
        Command::Vacuum(VacuumCommand::AlphaSolve) => commands::alpha_solve(&ctx),
        Command::Vacuum(VacuumCommand::FreeEnergy(args)) => commands::free_energy(&ctx, args),
        Command::Vacuum(VacuumCommand::PlateEnergy(args)) => commands::plate_energy(&ctx, args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
