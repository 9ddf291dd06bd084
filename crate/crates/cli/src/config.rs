use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "bcp", version, about = "Sparse binary cyclotomic polynomials: counts, sums and discrepancies")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Scale x
    #[arg(long, global = true, default_value_t = 1e6)]
    pub x: f64,
    /// Sparsity exponent γ in (0, 1/2)
    #[arg(long, global = true, default_value_t = 0.45)]
    pub gamma: f64,
    /// Margin η: γ must not exceed 1/2 − η
    #[arg(long, global = true, default_value_t = bcp_core::analytic::DEFAULT_ETA)]
    pub eta: f64,
    /// Worker threads [default: available parallelism]
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Directory of cached prime tables
    #[arg(long, global = true, env = "BCP_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Seed for sampled maxima
    #[arg(long, global = true, default_value_t = bcp_core::expsums::DEFAULT_SEED)]
    pub seed: u64,
    /// Report wall-clock time instead of 0 in `elapsed`
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// C(γ), H(γ), κ₀, γ₀ and ρ at the given scale
    Analytic,
    /// θ(pq) by the Carlitz formula and from the polynomial
    Theta {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
    },
    /// Exact H_γ(x) against the predicted main term
    Hcount {
        /// Comma-separated ascending x values; overrides --x
        #[arg(long, value_delimiter = ',')]
        table: Vec<f64>,
    },
    /// R and R_γ for every admissible box
    Boxes {
        /// Power of log 2x in the small-P boundary x^{1/3}/L^k
        #[arg(long, default_value_t = bcp_core::analytic::SMALL_P_LOG_POWER)]
        small_log_power: f64,
    },
    /// Bound reports for Kloosterman sums over primes
    Expsum(ExpsumArgs),
    /// Star discrepancy and Erdős–Turán bound per box
    Discrepancy {
        /// Erdős–Turán cutoff A [default: P − 1]
        #[arg(long)]
        a: Option<u64>,
    },
    /// Runs every invariant check; exits 1 on the first failure
    Verify,
    /// Sieve (or load from cache) the primes up to a limit
    Primes {
        /// [default: x]
        #[arg(long)]
        limit: Option<u64>,
        /// One row per prime instead of a summary
        #[arg(long)]
        list: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Lemma {
    All,
    Weil,
    KorolevChanga,
    Irving,
    Dfi,
}

#[derive(Debug, Clone, Args)]
pub struct ExpsumArgs {
    #[arg(long, value_enum, default_value_t = Lemma::All)]
    pub lemma: Lemma,
    /// Prime modulus for the single-prime reports
    #[arg(long, default_value_t = 1009)]
    pub p: u64,
    /// Window start [default: p]
    #[arg(long)]
    pub y: Option<f64>,
    /// Window end [default: 2y]
    #[arg(long)]
    pub z: Option<f64>,
    /// P for the averaged reports
    #[arg(long, default_value_t = 300.0)]
    pub big_p: f64,
    /// Q for the averaged reports
    #[arg(long, default_value_t = 2000.0)]
    pub big_q: f64,
    /// Frequency a for the DFI report
    #[arg(long, default_value_t = 3)]
    pub a: i64,
}

/// Validated run settings shared by all commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub x: f64,
    pub gamma: f64,
    pub eta: f64,
    pub workers: usize,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
    pub seed: u64,
    pub timing: bool,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, String> {
        let g = cli.global;
        let workers = g.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if workers == 0 {
            return Err("--workers must be at least 1".into());
        }
        if !g.x.is_finite() || g.x < 2.0 {
            return Err(format!("--x must be a finite number ≥ 2, got {}", g.x));
        }
        Ok(RunConfig {
            command: cli.command,
            x: g.x,
            gamma: g.gamma,
            eta: g.eta,
            workers,
            format: g.format,
            cache_dir: g.cache_dir,
            seed: g.seed,
            timing: g.timing,
        })
    }
}
