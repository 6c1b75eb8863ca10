//! `renyi-robust` — divergences, variational identities and robust bounds
//! from the command line.
//!
//! Exit codes: 0 success, 1 certificate or sandwich failure, 2 invalid input.

mod cmd;
mod config;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use renyi_robust::{Execution, RngSeed};

use output::{Format, Outcome};

#[derive(Debug, Parser)]
#[command(name = "renyi-robust", version, about = "Rényi-divergence robust bounds and their validation")]
pub struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
pub struct GlobalOpts {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Base seed for every random stream.
    #[arg(long, global = true, env = "RENYI_SEED", default_value_t = 0)]
    seed: u64,

    /// Write data here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for data-parallel loops (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Run data-parallel loops on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,

    /// JSON object of flag values; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rényi divergence (or relative entropy) between two laws.
    Renyi(cmd::renyi::Args),
    /// Check the variational identities and their tilted optimizers.
    Identity(cmd::identity::Args),
    /// Exceedance-probability bound curves over α for Brownian motion.
    BrownianFigures(cmd::figures::Args),
    /// Queue overflow decay rate and robust overflow sandwich.
    Queue(cmd::queue::Args),
    /// Monte Carlo estimators.
    #[command(subcommand)]
    Mc(cmd::mc::McCommand),
    /// Laplace transform of the argmax time and its robust bounds.
    Laplace(cmd::laplace::Args),
}

/// What every command receives besides its own flags.
pub struct Context {
    pub seed: RngSeed,
    pub exec: Execution,
}

fn main() -> ExitCode {
    let argv = match config::merged_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let g = &cli.global;
    #[cfg(feature = "parallel")]
    if let Some(n) = g.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("warning: could not size thread pool: {e}");
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = g.threads;
    let ctx = Context {
        seed: RngSeed(g.seed),
        exec: if g.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let result = match &cli.command {
        Command::Renyi(a) => cmd::renyi::run(a, &ctx),
        Command::Identity(a) => cmd::identity::run(a, &ctx),
        Command::BrownianFigures(a) => cmd::figures::run(a, &ctx),
        Command::Queue(a) => cmd::queue::run(a, &ctx),
        Command::Mc(a) => cmd::mc::run(a, &ctx),
        Command::Laplace(a) => cmd::laplace::run(a, &ctx),
    };
    match result {
        Ok(Outcome { report, pass }) => {
            if let Err(e) = report.emit(g.format, g.output.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
