//! `qubit-uncertainty`: verify, report, simulate, sweep and estimate.
//!
//! Exit codes: 0 success, 1 property or statistical failure, 2 usage or
//! configuration error.

mod commands;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qubit-uncertainty",
    version,
    about = "Variance uncertainty relations for a qubit"
)]
struct Cli {
    /// RNG seed; every run is reproducible from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (standard output if omitted).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Analytic,
    Numeric,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every invariant check and print a coverage summary.
    Verify {
        /// Random samples per property (some properties use ten times this).
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// All bounds and the mixedness estimate for one state and observable pair.
    Report(PairArgs),
    /// Feedback-model trajectory.
    Simulate(SimulateArgs),
    /// Tightness ratios over a parameter grid.
    Sweep(SweepArgs),
    /// Mixedness estimate from simulated measurement counts.
    Estimate {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
    },
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Bloch vector px,py,pz.
    #[arg(long, value_parser = parse_list::<3>, allow_hyphen_values = true, default_value = "0,0,0")]
    pub bloch: [f64; 3],
    /// Coefficients of σx, σy, σz, I for A.
    #[arg(long, value_parser = parse_list::<4>, allow_hyphen_values = true, default_value = "1,0,0,0")]
    pub obs_a: [f64; 4],
    /// Coefficients of σx, σy, σz, I for B.
    #[arg(long, value_parser = parse_list::<4>, allow_hyphen_values = true, default_value = "0,0,1,0")]
    pub obs_b: [f64; 4],
}

/// Parses exactly `N` comma-separated numbers.
fn parse_list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let values = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    values
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Initial-state angle in radians.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Rabi frequency; only the numeric source supports a nonzero value.
    #[arg(long, default_value_t = 0.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 5.0)]
    pub t_end: f64,
    /// Output spacing, and the RK4 step for numeric sources.
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    #[arg(long, value_enum, default_value_t = Source::Analytic)]
    pub source: Source,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// (α, t) grid at λ = 1; the default layout.
    #[arg(long, conflicts_with = "fig3")]
    pub fig2: bool,
    /// (λ, t) grid at α = π/4.
    #[arg(long)]
    pub fig3: bool,
    /// Points per swept axis.
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    /// Evaluate with RK4 instead of the closed form (`both` is not accepted).
    #[arg(long, value_enum, default_value_t = Source::Analytic)]
    pub source: Source,
    /// RK4 step for the numeric source.
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    /// Fixed α for the --fig3 grid (default π/4).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Fixed λ for the (α, t) grid (default 1).
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub omega: f64,
    /// Upper end of the time axis.
    #[arg(long, default_value_t = 3.0)]
    pub t_end: f64,
}

/// A command failure carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or parameters (exit 2).
    Config(String),
    /// A property or statistical check did not hold (exit 1).
    Check(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::Check(_) => 1,
        }
    }
}

impl From<qubit_uncertainty::Error> for Failure {
    fn from(e: qubit_uncertainty::Error) -> Self {
        Self::Config(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Config(format!("i/o: {e}"))
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self::Config(format!("{e:#}"))
    }
}

pub struct Context {
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context {
        seed: cli.seed,
        output: cli.output,
        format: cli.format,
    };
    let result = match cli.command {
        Command::Verify { samples } => verify::run(&ctx, samples),
        Command::Report(pair) => commands::report(&ctx, &pair),
        Command::Simulate(args) => commands::simulate(&ctx, &args),
        Command::Sweep(args) => commands::sweep(&ctx, &args),
        Command::Estimate { pair, shots } => commands::estimate(&ctx, &pair, shots),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Config(m) => eprintln!("error: {m}"),
                Failure::Check(m) => eprintln!("failed: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
