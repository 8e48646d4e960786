//! `sonc-sep`: certify circuit and SONC nonnegativity, compute the certified
//! separation bound, audit the convexity identity, and run the search.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 usage or input error,
//! 3 soundness alarm from `attack`.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "sonc-sep",
    version,
    about = "Exact SONC certificates and separation bounds"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file (CSV trace for `attack`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect a circuit polynomial and decide its nonnegativity.
    CheckCircuit {
        /// Polynomial in x1..xn, e.g. "x1^4 - 3*x1^2 + 1".
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        n: usize,
        /// Evaluation budget for the negative-point search.
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
    },
    /// Verify a SONC certificate JSON file.
    CheckCert { file: PathBuf },
    /// Certified lower bound on the distance from the witness to SONC.
    Bound(BoundArgs),
    /// Check the polynomial identity and log-convexity of phi.
    PhiAudit,
    /// Search for SONC approximations of the witness.
    Attack {
        #[command(flatten)]
        bound: BoundArgs,
        /// Iterations per restart.
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 6)]
        parts: usize,
        /// Grid points per axis for the sup-norm.
        #[arg(long, default_value_t = 17)]
        resolution: usize,
        #[arg(long, default_value_t = 1_000)]
        checkpoint_every: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    /// Box K, one `lo:hi` per axis or a single one broadcast to all axes.
    #[arg(long = "K", required = true, allow_hyphen_values = true)]
    pub k: Vec<String>,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub n: usize,
    /// Explicit u (`p/q` or decimal) instead of the default 1 + 1/k scan.
    #[arg(long)]
    pub u: Option<String>,
    /// Rescale K around an interior point first when (1, ..., 1) is not inside.
    #[arg(long)]
    pub anchor: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::EXIT_USAGE)
        }
    }
}
