mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "fuzzyloop", version, about = "Poisson tables, Toeplitz quantization checks and cocycle convergence sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration; omitted fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for tables, caches and reports.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Drop levels above this from k_list.
    #[arg(long, global = true)]
    kmax: Option<u32>,

    #[arg(long, global = true)]
    lmax: Option<u32>,

    #[arg(long, global = true)]
    twist: Option<Switch>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the Poisson structure-constant table and exact symbol caches.
    Tables,
    /// Run the verification suite; exits nonzero if any check fails.
    Verify,
    /// Convergence sweep of the rescaled cocycle for the configured loop pair.
    Sweep,
    /// Print a text report from existing artifacts in the output directory.
    Report,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl Cli {
    fn run_config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        if let Some(kmax) = self.kmax {
            cfg.k_list.retain(|&k| k <= kmax);
        }
        if let Some(lmax) = self.lmax {
            cfg.lmax = lmax;
        }
        if let Some(t) = self.twist {
            cfg.twist = matches!(t, Switch::On);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let cfg = cli.run_config()?;
    match cli.command {
        Command::Tables => commands::tables(&cfg)?,
        Command::Verify => return commands::verify(&cfg),
        Command::Sweep => {
            commands::sweep(&cfg)?;
        }
        Command::Report => print!("{}", commands::report(&cfg)?),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
