use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use smap::harness::{run, Command, ExperimentConfig};
use smap::SmapError;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    /// Midpoint integration of sphere data, snapshots and Gronwall series.
    Evolve,
    /// Picard iteration for every configured amplitude.
    Picard,
    /// Space-time norms and lemma ratios on a seeded ensemble.
    Norms,
    /// Invariant suite with a pass/fail summary.
    Verify,
    /// Lifted chart solution against the sphere integrator.
    Compare,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Evolve => Command::Evolve,
            Cmd::Picard => Command::Picard,
            Cmd::Norms => Command::Norms,
            Cmd::Verify => Command::Verify,
            Cmd::Compare => Command::Compare,
        }
    }
}

/// Schrödinger map simulator and verification harness.
#[derive(Debug, Parser)]
#[command(name = "smap", version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    /// `key = value` config file; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Random seed (overrides `seed`).
    #[arg(long)]
    seed: Option<u64>,
    /// Permit sigma0 <= (d+1)/2; outputs are labelled.
    #[arg(long)]
    allow_subcritical: bool,
}

fn load(cli: &Cli) -> Result<ExperimentConfig, SmapError> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.allow_subcritical |= cli.allow_subcritical;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("SMAP_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let result = load(&cli).and_then(|cfg| {
        let mut stdout = std::io::stdout();
        run(cli.command.into(), &cfg, &mut stdout)
    });
    match result {
        Ok(dir) => {
            println!("wrote {}", dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
