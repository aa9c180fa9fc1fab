//! Command-line front end for the membed solvers.
//!
//! Subcommands: `walker` (embedded droplet), `walker-direct` (path-storing
//! oracle), `stefan` (embedded melting front), `bench` (step-cost comparison),
//! `verify` (invariant suite). Exit codes: 0 success, 1 failed verification or
//! I/O trouble, 2 configuration error, 3 solver divergence.

mod bench;
mod config;
mod output;
mod run;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Everything that can go wrong after argument parsing, carrying its exit
/// code. Configuration problems (bad file, invalid value, model mismatch)
/// exit 2; solver divergence exits 3; verification failure and I/O errors
/// exit 1.
pub enum CliError {
    Config(String),
    Divergence(membed::Error),
    VerifyFailed(usize),
    Io(anyhow::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Divergence(_) => 3,
            CliError::VerifyFailed(_) | CliError::Io(_) => 1,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "membed",
    version,
    about = "Markovian-embedding solvers for nonlocal (memory-kernel) evolution equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Embedded walking-droplet simulation (spectral history field)
    Walker(WalkerArgs),
    /// Direct walking-droplet simulation (stored path, quadratic cost); oracle
    WalkerDirect(WalkerArgs),
    /// Embedded Stefan melting-front simulation tracking the similarity solution
    Stefan(StefanArgs),
    /// Per-decile step-cost comparison: embedded vs direct walker
    Bench(BenchArgs),
    /// Run the invariant suite and print measured values
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
pub struct WalkerArgs {
    /// TOML config file; command-line flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (default "out")
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Time step
    #[arg(long)]
    pub dt: Option<f64>,
    /// Number of steps (duration = steps * dt); exclusive with --tfinal
    #[arg(long, conflicts_with = "tfinal")]
    pub steps: Option<u64>,
    /// Final time
    #[arg(long)]
    pub tfinal: Option<f64>,
    /// Spectral node parameter M (M + 1 nodes)
    #[arg(long, value_name = "M")]
    pub nodes: Option<usize>,
    /// Wave-memory coupling C1
    #[arg(long)]
    pub c1: Option<f64>,
    /// Wave decay rate C2
    #[arg(long)]
    pub c2: Option<f64>,
    /// History snapshot times (embedded model only)
    #[arg(long, value_delimiter = ',', value_name = "t[,t...]")]
    pub snapshot: Option<Vec<f64>>,
    /// Record every n-th step in the trajectory
    #[arg(long, value_name = "n")]
    pub stride: Option<usize>,
}

#[derive(Args, Clone)]
pub struct StefanArgs {
    /// TOML config file; command-line flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (default "out")
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Time step
    #[arg(long)]
    pub dt: Option<f64>,
    /// Number of steps (duration = steps * dt from t0); exclusive with --tfinal
    #[arg(long, conflicts_with = "tfinal")]
    pub steps: Option<u64>,
    /// Final time (must exceed t0)
    #[arg(long)]
    pub tfinal: Option<f64>,
    /// Spectral node parameter M (M + 1 nodes)
    #[arg(long, value_name = "M")]
    pub nodes: Option<usize>,
    /// Spectral truncation: nodes span [-K, K]
    #[arg(long, value_name = "K")]
    pub ktrunc: Option<f64>,
    /// History snapshot times
    #[arg(long, value_delimiter = ',', value_name = "t[,t...]")]
    pub snapshot: Option<Vec<f64>>,
    /// Record every n-th step in the trajectory
    #[arg(long, value_name = "n")]
    pub stride: Option<usize>,
}

#[derive(Args, Clone)]
pub struct BenchArgs {
    /// TOML config file (walker model); output-shaping keys are ignored
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (default "out")
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Time step
    #[arg(long)]
    pub dt: Option<f64>,
    /// Number of steps; exclusive with --tfinal
    #[arg(long, conflicts_with = "tfinal")]
    pub steps: Option<u64>,
    /// Final time
    #[arg(long)]
    pub tfinal: Option<f64>,
    /// Spectral node parameter M for the embedded solver
    #[arg(long, value_name = "M")]
    pub nodes: Option<usize>,
    /// Wave-memory coupling C1
    #[arg(long)]
    pub c1: Option<f64>,
    /// Wave decay rate C2
    #[arg(long)]
    pub c2: Option<f64>,
}

#[derive(Args, Clone)]
pub struct VerifyArgs {
    /// Print each check's description alongside its measured value
    #[arg(long)]
    pub verbose: bool,
    /// Negative-control hook: scale the kernel-check quadrature weights by
    /// 1 + 1e-3, which must make the kernel residual checks fail
    #[arg(long)]
    pub perturb_weights: bool,
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Walker(args) => {
            let cfg = config::resolve_walker(&args, false)?;
            run::run_walker_embedded(&cfg)
        }
        Command::WalkerDirect(args) => {
            let cfg = config::resolve_walker(&args, true)?;
            run::run_walker_direct(&cfg)
        }
        Command::Stefan(args) => {
            let cfg = config::resolve_stefan(&args)?;
            run::run_stefan(&cfg)
        }
        Command::Bench(args) => {
            let cfg = config::resolve_bench(&args)?;
            bench::run(&cfg)
        }
        Command::Verify(args) => verify::run(args.verbose, args.perturb_weights),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            match &err {
                CliError::Config(msg) => eprintln!("config error: {msg}"),
                CliError::Divergence(e) => eprintln!("{e}"),
                CliError::VerifyFailed(n) => eprintln!("verify: {n} check(s) failed"),
                CliError::Io(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(err.exit_code())
        }
    }
}
