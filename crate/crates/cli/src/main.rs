//! Command-line front end of the rough Heston toolkit.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad invocation or unusable input; reported without a backtrace.
    #[error("{0}")]
    Usage(String),
    /// A numerical operation failed inside the library.
    #[error(transparent)]
    Core(#[from] rough_heston::Error),
}

/// Rough Heston model toolkit: characteristic function evaluation, Fourier
/// option pricing, volatility smile and skew curves, Hawkes microstructure
/// simulation, and an executable validation suite.
#[derive(Parser)]
#[command(name = "rough-heston", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Config file: flat key = value lines under [model], [numerics],
    /// [hawkes], [output] headers; flags override file values
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Roughness exponent in (1/2, 1]; 1 is the classical model
    #[arg(long, global = true)]
    alpha: Option<f64>,

    /// Mean-reversion speed
    #[arg(long, global = true)]
    lambda: Option<f64>,

    /// Long-run variance level
    #[arg(long, global = true)]
    theta: Option<f64>,

    /// Price-variance correlation in [-1, 1]
    #[arg(long, global = true, allow_negative_numbers = true)]
    rho: Option<f64>,

    /// Volatility of volatility
    #[arg(long, global = true)]
    nu: Option<f64>,

    /// Spot variance
    #[arg(long, global = true)]
    v0: Option<f64>,

    /// Time-grid panels per solve; 0 picks a maturity-dependent default
    #[arg(long, global = true)]
    steps: Option<usize>,

    /// Master seed of the simulation generator
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Number of Monte Carlo paths
    #[arg(long, global = true)]
    paths: Option<usize>,

    /// Output directory; without it artifacts print to stdout
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Log-price characteristic function on a grid of arguments and times
    Cf {
        /// Transform arguments, comma separated
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "0.5,1,2"
        )]
        a: Vec<f64>,

        /// Evaluation times, comma separated
        #[arg(long, value_delimiter = ',', default_value = "0.5,1")]
        t: Vec<f64>,

        /// Use the closed-form classical transform (alpha = 1 only)
        #[arg(long)]
        oracle: bool,
    },

    /// Price one European call and report its implied volatility
    Price {
        #[arg(long, default_value_t = 1.0)]
        strike: f64,

        #[arg(long, default_value_t = 1.0)]
        maturity: f64,
    },

    /// Implied-volatility smile across strikes and maturities
    Smile {
        /// Strikes, comma separated (spot is 1)
        #[arg(long, value_delimiter = ',', default_value = "0.8,0.9,1,1.1,1.2")]
        strikes: Vec<f64>,

        /// Maturities, comma separated
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1")]
        maturities: Vec<f64>,
    },

    /// At-the-money skew term structure, rough and classical side by side
    Skew {
        /// Maturities, comma separated
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0.025,0.05,0.1,0.25,0.5,1"
        )]
        maturities: Vec<f64>,
    },

    /// Simulate the order-flow model and cross-check its transforms
    Hawkes {
        /// Baseline order arrival rate
        #[arg(long)]
        mu: Option<f64>,

        /// Cross-excitation asymmetry (1 is fully symmetric)
        #[arg(long)]
        beta: Option<f64>,

        /// Initial-burst weight of the baseline
        #[arg(long)]
        xi: Option<f64>,

        /// Observation horizon T; stability needs T^alpha > lambda
        #[arg(long)]
        horizon: Option<f64>,

        /// Also dump the first N paths as an event CSV
        #[arg(long, value_name = "N")]
        events: Option<usize>,
    },

    /// Run the validation suite; exits nonzero if any gate fails
    Validate,
}

fn effective_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::default();
    if let Some(path) = &cli.config {
        config.apply_file(path)?;
    }
    if let Some(x) = cli.alpha {
        config.alpha = x;
    }
    if let Some(x) = cli.lambda {
        config.lambda = x;
    }
    if let Some(x) = cli.theta {
        config.theta = x;
    }
    if let Some(x) = cli.rho {
        config.rho = x;
    }
    if let Some(x) = cli.nu {
        config.nu = x;
    }
    if let Some(x) = cli.v0 {
        config.v0 = x;
    }
    if let Some(x) = cli.steps {
        config.steps = x;
    }
    if let Some(x) = cli.seed {
        config.seed = x;
    }
    if let Some(x) = cli.paths {
        config.paths = x;
    }
    if let Some(dir) = &cli.out {
        config.out_dir = Some(dir.clone());
    }
    Ok(config)
}

fn run() -> Result<bool, CliError> {
    let cli = Cli::parse();
    let mut config = effective_config(&cli)?;
    match &cli.command {
        Command::Cf { a, t, oracle } => {
            commands::cmd_cf(&config, a, t, *oracle)?;
            Ok(true)
        }
        Command::Price { strike, maturity } => {
            commands::cmd_price(&config, *strike, *maturity)?;
            Ok(true)
        }
        Command::Smile { strikes, maturities } => {
            commands::cmd_smile(&config, strikes, maturities)?;
            Ok(true)
        }
        Command::Skew { maturities } => {
            commands::cmd_skew(&config, maturities)?;
            Ok(true)
        }
        Command::Hawkes {
            mu,
            beta,
            xi,
            horizon,
            events,
        } => {
            if let Some(x) = mu {
                config.mu = *x;
            }
            if let Some(x) = beta {
                config.beta = *x;
            }
            if let Some(x) = xi {
                config.xi = *x;
            }
            if let Some(x) = horizon {
                config.horizon = *x;
            }
            commands::cmd_hawkes(&config, *events)?;
            Ok(true)
        }
        Command::Validate => commands::cmd_validate(&config),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
