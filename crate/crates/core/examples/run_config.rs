//! Drives a config-file sweep through the library and prints the aggregates;
//! this is what the `rmtlab` binary does for each verb.
//!
//! ```text
//! cargo run --release --example run_config -- examples/configs/wigner_gaussian.toml wigner
//! ```

use std::path::PathBuf;

use rmtlab::harness::{run, ExperimentConfig, Verb};

fn main() -> rmtlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(
        args.next()
            .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/wigner_gaussian.toml").into()),
    );
    let verb: Verb = args.next().as_deref().unwrap_or("wigner").parse()?;
    let cfg = ExperimentConfig::load(&path)?;
    let outcome = run(&cfg, verb, None)?;
    let report = &outcome.report;
    println!("config {} ({verb}), hash {}", path.display(), &report.config_hash[..16]);
    for a in &report.aggregates {
        println!(
            "  n = {:>5}  {:<22} median {:.4e}  mean {:.4e} +- {:.1e}",
            a.size, a.metric, a.median, a.mean, a.stderr
        );
    }
    for a in &report.assertions {
        println!("  [{}] {}", if a.passed { "PASS" } else { "FAIL" }, a.description);
    }
    let written = outcome.write(std::path::Path::new(&cfg.output.dir))?;
    println!("wrote {} files under {}", written.len(), cfg.output.dir);
    Ok(())
}
