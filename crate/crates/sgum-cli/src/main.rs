use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use sgum_cli::config::{ExperimentConfig, ExperimentKind};
use sgum_cli::experiments::run_experiment;

#[derive(Parser)]
#[command(name = "sgum")]
#[command(about = "Seeded SGUM game experiments: chains, sweeps, and exact analyses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment configuration (TOML); a run manifest also works.
    #[arg(long)]
    config: PathBuf,

    /// Override the master seed from the config.
    #[arg(long)]
    seed: Option<u64>,

    /// Override the replication count from the config.
    #[arg(long)]
    replications: Option<u64>,

    /// Directory for CSV output and the run manifest.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Run the randomized spectrum-access chain and export its event trace.
    Spectrum(RunArgs),
    /// Closed-form power-control sweeps (tie grid or multi-user benchmark).
    Power(RunArgs),
    /// Closed-form random-access tie-grid sweep.
    RandomAccess(RunArgs),
    /// Exact stationary law, optimality gaps, and chain diagnostics.
    Stationary(RunArgs),
    /// Spectrum sweeps: social link density or theta trade-off.
    Sweep(RunArgs),
}

fn accepted_kinds(command: &Command) -> &'static [ExperimentKind] {
    match command {
        Command::Spectrum(_) => &[ExperimentKind::SpectrumChain],
        Command::Power(_) => &[ExperimentKind::PowerSweep],
        Command::RandomAccess(_) => &[ExperimentKind::RandomAccessSweep],
        Command::Stationary(_) => &[ExperimentKind::StationaryAnalysis],
        Command::Sweep(_) => &[
            ExperimentKind::SpectrumSweepPl,
            ExperimentKind::SpectrumThetaTradeoff,
        ],
    }
}

fn run(cli: Cli) -> Result<()> {
    let args = match &cli.command {
        Command::Spectrum(a)
        | Command::Power(a)
        | Command::RandomAccess(a)
        | Command::Stationary(a)
        | Command::Sweep(a) => a,
    };
    let mut cfg = ExperimentConfig::load(&args.config)?;
    let allowed = accepted_kinds(&cli.command);
    if !allowed.contains(&cfg.kind) {
        bail!(
            "config kind `{}` does not match this subcommand (expected one of: {})",
            cfg.kind.name(),
            allowed
                .iter()
                .map(|k| k.name())
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(replications) = args.replications {
        cfg.replications = replications;
    }
    cfg.validate(args.config.parent())?;
    let output = run_experiment(&cfg, &args.out_dir, args.config.parent())?;
    for warning in &output.warnings {
        eprintln!("warning: {warning}");
    }
    for file in &output.files {
        println!("{}", file.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
