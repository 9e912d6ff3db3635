mod commands;
mod config;
mod error;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Example, Overrides, RunConfig};
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "convolab",
    version,
    about = "Convoluted cosine functions and semigroups on spectral models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate K, Θ and the Laplace transform of a kernel
    Kernel(Flags),
    /// Run generation-class checks on an operator
    Classify(Flags),
    /// Compute a convoluted cosine or semigroup trajectory
    Simulate(Flags),
    /// Run the identity residual suite
    Verify(Flags),
    /// Reproduce the polyharmonic or Beals example
    Reproduce(Flags),
}

#[derive(Args, Debug)]
struct Flags {
    /// JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    t_max: Option<f64>,
    /// Generate verification trajectories from a perturbed kernel
    #[arg(long)]
    corrupt_kernel: bool,
    #[arg(long, value_enum)]
    example: Option<ExampleArg>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ExampleArg {
    Polyharmonic,
    Beals,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            out: self.out.clone(),
            tolerance: self.tolerance,
            steps: self.steps,
            t_max: self.t_max,
            corrupt_kernel: self.corrupt_kernel,
            example: self.example.map(|e| match e {
                ExampleArg::Polyharmonic => Example::Polyharmonic,
                ExampleArg::Beals => Example::Beals,
            }),
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("CONVOLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("CONVOLAB_THREADS = {raw:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    configure_threads()?;
    let (flags, cmd): (&Flags, fn(&RunConfig) -> Result<Vec<PathBuf>, CliError>) = match &cli.command {
        Command::Kernel(f) => (f, commands::cmd_kernel),
        Command::Classify(f) => (f, commands::cmd_classify),
        Command::Simulate(f) => (f, commands::cmd_simulate),
        Command::Verify(f) => (f, commands::cmd_verify),
        Command::Reproduce(f) => (f, reproduce::cmd_reproduce),
    };
    let cfg = RunConfig::load(&flags.config, flags.overrides())?;
    cfg.prepare_out()?;
    cmd(&cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(paths) => {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("convolab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
