mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Config;

#[derive(Parser, Debug)]
#[command(name = "fixtree", version, about = "Self-similar random real trees from recursive decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Named parameter set, e.g. `crt`, `lamination-z`, `homogeneous-h`, `kgon-recursive(3)`.
    #[arg(long, global = true)]
    preset: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    replicas: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output directory, receives `<command>.csv`; standard output when absent.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Solve the index equation and print the F(a) curve.
    Alpha,
    /// Approximant Q_n on a uniform grid.
    Excursion,
    /// Divider ladders and dimension fits.
    Dimension,
    /// Distribution function τ_n on a grid.
    Timechange,
    /// Root-to-point distances from the perpetuity and from excursions.
    Heights,
    /// Disk lamination scaling run.
    Lamination,
    /// Exit-point chain trajectory.
    Chain,
    /// Predicted degree set.
    Degrees,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Alpha => "alpha",
            Command::Excursion => "excursion",
            Command::Dimension => "dimension",
            Command::Timechange => "timechange",
            Command::Heights => "heights",
            Command::Lamination => "lamination",
            Command::Chain => "chain",
            Command::Degrees => "degrees",
        }
    }
}

fn resolve(cli: &Cli) -> Result<Config, config::ConfigError> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(p) = &cli.preset {
        cfg.preset = Some(p.clone());
        cfg.tree = None;
        cfg.law = None;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(r) = cli.replicas {
        cfg.replicas = r;
    }
    if let Some(j) = cli.jobs {
        cfg.jobs = Some(j);
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(j) = cfg.jobs {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    match commands::run(cli.command, &cfg, cli.out.as_deref()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                commands::RunError::Config(_) => 2,
                _ => 1,
            })
        }
    }
}
