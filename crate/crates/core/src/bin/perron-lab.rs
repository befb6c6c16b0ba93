use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use perron_lab::experiments::{run, ExperimentConfig, ExperimentKind};
use perron_lab::Error;

/// Run one experiment and write report.json, metrics CSVs and figures.
#[derive(Debug, Parser)]
#[command(name = "perron-lab", version)]
struct Cli {
    /// good, bad, lattice, trapezium, transfer, coboundary or verify
    experiment: String,
    #[arg(long)]
    config: PathBuf,
    /// Overrides `output_dir` from the config (default `out/<experiment>`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match go(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("perron-lab: {e}");
            ExitCode::from(1)
        }
    }
}

fn go(cli: &Cli) -> Result<u8, Error> {
    if let Some(n) = std::env::var("PERRON_LAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // only fails if a pool already exists
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let kind: ExperimentKind = cli.experiment.parse()?;
    let mut cfg = ExperimentConfig::load(&cli.config)?;
    if let Some(k) = cfg.experiment {
        if k != kind {
            return Err(Error::Config(format!("config declares experiment `{k}` but `{kind}` was requested")));
        }
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out").join(kind.name()));
    let start = Instant::now();
    let report = run(kind, &cfg)?;
    report.write(&out)?;
    for v in &report.verdicts {
        println!("{} {} ({}): {}", if v.passed { "PASS" } else { "FAIL" }, v.id, v.anchor, v.detail);
    }
    println!("wrote {} in {:.2?}", out.display(), start.elapsed());
    Ok(report.exit_code() as u8)
}
