//! `euler-gauss`: batch CLI for gamma computation, interval certification,
//! support classification, Monte Carlo verification and short-time evolution
//! experiments.
//!
//! Exit codes: 0 success, 2 configuration error, 3 unsupported request,
//! 4 numerical abort.

mod commands;
mod profiles;
mod schema;

use clap::{Args, Parser, Subcommand};
use commands::{CertifyArgs, EvolveArgs, GammaArgs, McVerifyArgs};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Unsupported(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Io(_) => 1,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Unsupported(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

pub struct RunContext {
    pub out_dir: Option<PathBuf>,
    pub reproducible: bool,
}

#[derive(Parser)]
#[command(name = "euler-gauss", version, about = "gamma functional toolkit for 2D Euler with Gaussian data")]
struct Cli {
    /// Worker threads (default: all cores; env EULER_GAUSS_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Deterministic outputs: fixed reductions, zeroed runtimes, empty timestamps.
    #[arg(long, global = true)]
    reproducible: bool,
    /// Directory for JSON/CSV artifacts (stdout always gets the JSON).
    #[arg(long = "out", global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ProfileOpt {
    /// Built-in profile name or path to a sequence JSON file.
    #[arg(long)]
    profile: String,
    /// Materialization radius for radial profiles (powerlog, gibbs-like).
    #[arg(long, default_value_t = 10)]
    radius: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate gamma at one s or across a grid.
    Gamma {
        #[command(flatten)]
        profile: ProfileOpt,
        #[arg(long)]
        s: Option<f64>,
        /// Comma-separated s grid; flags the first s with |gamma| above the threshold.
        #[arg(long = "s-grid", value_delimiter = ',')]
        s_grid: Option<Vec<f64>>,
        #[arg(long, default_value_t = euler_gauss_core::gamma::SCAN_THRESHOLD)]
        threshold: f64,
    },
    /// Interval-certified sign of gamma (power-log profile, s = 1/2).
    Certify {
        #[arg(long)]
        profile: String,
        #[arg(long)]
        s: f64,
        /// Partial-sum radius.
        #[arg(long = "N")]
        n: i64,
    },
    /// Classify the support as Line / Circle / NonDegenerate / Empty.
    Classify {
        #[command(flatten)]
        profile: ProfileOpt,
    },
    /// Monte Carlo verification of the closed-form expectations.
    McVerify {
        #[command(flatten)]
        profile: ProfileOpt,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        truncation: i64,
    },
    /// Ensemble growth experiment with the truncated Galerkin flow.
    Evolve {
        #[command(flatten)]
        profile: ProfileOpt,
        #[arg(long)]
        s: f64,
        #[arg(long = "tmax", default_value_t = 0.05)]
        t_max: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        truncation: i64,
    },
    /// Merge JSON artifacts from a directory into CSV/Markdown summaries.
    Report {
        #[arg(long)]
        input: PathBuf,
    },
}

fn configure_threads(flag: Option<usize>) {
    let n = flag.or_else(|| {
        std::env::var("EULER_GAUSS_THREADS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(n) = n {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads(cli.threads);
    let ctx = RunContext { out_dir: cli.out_dir.clone(), reproducible: cli.reproducible };
    match &cli.command {
        Command::Gamma { profile, s, s_grid, threshold } => {
            let seq = profiles::resolve(&profile.profile, profile.radius)?;
            let args = GammaArgs {
                profile: profile.profile.clone(),
                s: *s,
                s_grid: s_grid.clone(),
                radius: profile.radius,
                threshold: *threshold,
            };
            commands::cmd_gamma(&ctx, &args, &seq)
        }
        Command::Certify { profile, s, n } => {
            commands::cmd_certify(&ctx, &CertifyArgs { profile: profile.clone(), s: *s, n: *n })
        }
        Command::Classify { profile } => {
            let seq = profiles::resolve(&profile.profile, profile.radius)?;
            commands::cmd_classify(&ctx, &profile.profile, &seq)
        }
        Command::McVerify { profile, s, samples, seed, truncation } => {
            let seq = profiles::resolve(&profile.profile, profile.radius)?;
            let args = McVerifyArgs {
                profile: profile.profile.clone(),
                s: *s,
                samples: *samples,
                seed: *seed,
                truncation: *truncation,
            };
            commands::cmd_mc_verify(&ctx, &args, &seq)
        }
        Command::Evolve { profile, s, t_max, dt, samples, seed, truncation } => {
            let seq = profiles::resolve(&profile.profile, profile.radius)?;
            let args = EvolveArgs {
                profile: profile.profile.clone(),
                s: *s,
                t_max: *t_max,
                dt: *dt,
                samples: *samples,
                seed: *seed,
                truncation: *truncation,
            };
            commands::cmd_evolve(&ctx, &args, &seq)
        }
        Command::Report { input } => commands::cmd_report(&ctx, input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
