use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use rmtlab::harness::{run, ExperimentConfig, Verb};

/// Config-driven Monte Carlo sweeps over random-matrix spectra.
#[derive(Parser)]
#[command(name = "rmtlab", version)]
struct Cli {
    #[command(subcommand)]
    verb: Command,
    /// Experiment config (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Replace the configured seed list with a single seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (overrides `output.dir`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// ESD of Wigner-type matrices against the semicircle or a variance-profile law.
    Wigner,
    /// ESD of sample covariance matrices against Marchenko-Pastur.
    Covariance,
    /// Tabulate a limit law and its Stieltjes-inversion density.
    LimitCurve,
    /// Lindeberg swap decomposition with remainder bounds.
    SwapDiagnostic,
    /// Lindeberg/variance conditions, perturbation, derivative and interpolation checks.
    Conditions,
    /// Quantile-quantile comparison of spectra against the limit.
    Qq,
}

impl From<Command> for Verb {
    fn from(c: Command) -> Verb {
        match c {
            Command::Wigner => Verb::Wigner,
            Command::Covariance => Verb::Covariance,
            Command::LimitCurve => Verb::LimitCurve,
            Command::SwapDiagnostic => Verb::SwapDiagnostic,
            Command::Conditions => Verb::Conditions,
            Command::Qq => Verb::Qq,
        }
    }
}

fn main() -> ExitCode {
    match try_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn try_main() -> anyhow::Result<bool> {
    let cli = Cli::parse();
    let path = cli.config.context("--config is required")?;
    let mut cfg = ExperimentConfig::load(&path).with_context(|| format!("loading {}", path.display()))?;
    if let Some(seed) = cli.seed {
        cfg.seeds = vec![seed];
    }
    let dir = cli.out.unwrap_or_else(|| PathBuf::from(&cfg.output.dir));
    let verb = Verb::from(cli.verb);
    let outcome = run(&cfg, verb, cli.threads)?;
    outcome.write(&dir)?;
    let r = &outcome.report;
    let failed = r.records.iter().filter(|x| !x.ok).count();
    eprintln!(
        "{verb}: {} records ({failed} failed), {:.1}s -> {}",
        r.records.len(),
        outcome.timings.total_seconds,
        dir.display()
    );
    for a in &r.assertions {
        let tag = if a.passed { "PASS" } else { "FAIL" };
        match a.observed {
            Some(v) => eprintln!("  [{tag}] {} (observed {v:.6e})", a.description),
            None => eprintln!("  [{tag}] {}", a.description),
        }
    }
    Ok(r.success)
}
