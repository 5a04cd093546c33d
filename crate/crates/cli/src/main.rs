use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use co3_cli::commands;

#[derive(Parser)]
#[command(name = "co3", version, about = "Bayesian co-clustering of censored ordinal matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic datasets with known co-clusters.
    Simulate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the sampler on a CSV and write partitions, similarities and traces.
    Fit {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// truth.json from `simulate`; adds ARI/BARI to the outputs.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Compare latent dimensions by LPML.
    SelectD {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        d_min: usize,
        #[arg(long)]
        d_max: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a fit directory against a truth file.
    Evaluate {
        #[arg(long)]
        est: PathBuf,
        #[arg(long)]
        truth: PathBuf,
    },
    /// Prior distribution of the number of co-clusters.
    PriorK {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha1: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha2: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn configure_threads() {
    let Ok(raw) = std::env::var("CO3_THREADS") else { return };
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("could not size the thread pool: {e}");
            }
        }
        _ => log::warn!("ignoring CO3_THREADS={raw:?}"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    configure_threads();
    let result = match &cli.command {
        Command::Simulate { config, out } => commands::cmd_simulate(config.as_deref(), out),
        Command::Fit { data, config, out, truth } => commands::cmd_fit(data, config.as_deref(), out, truth.as_deref()),
        Command::SelectD { data, config, d_min, d_max, out } => {
            commands::cmd_select_d(data, config.as_deref(), *d_min, *d_max, out)
        }
        Command::Evaluate { est, truth } => commands::cmd_evaluate(est, truth),
        Command::PriorK { n, p, alpha1, alpha2, out } => commands::cmd_prior_k(*n, *p, *alpha1, *alpha2, out),
    };
    match result {
        Ok(m) => {
            for f in &m.outputs {
                println!("{f}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
