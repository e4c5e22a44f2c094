//! `palm`: run a verification experiment config and write CSV results.
//!
//! Exit codes: 0 when every row passes, 1 when any row fails, 2 on config
//! or I/O errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use palm_core::experiment::{parse_config, run_to_csv};
use palm_core::Error;

#[derive(Debug, Parser)]
#[command(name = "palm", version, about = "Palm superposition verification runner")]
struct Args {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,

    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Output CSV path (overrides the config's `output`; `-` for stdout).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads; results do not depend on this.
    #[arg(long, env = "PALM_THREADS")]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("palm: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(args: &Args) -> Result<bool, Error> {
    let text = fs::read_to_string(&args.config)?;
    let mut config = parse_config(&text)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let out = args
        .out
        .clone()
        .or_else(|| config.output.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("-"));

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        pool = pool.num_threads(n.max(1));
    }
    let pool = pool.build().map_err(|e| Error::Io(e.to_string()))?;
    let (rows, csv) = pool.install(|| run_to_csv(&config))?;

    if out.as_os_str() == "-" {
        print!("{}", String::from_utf8_lossy(&csv));
    } else {
        fs::write(&out, &csv)?;
    }
    for r in rows.iter().filter(|r| !r.pass) {
        eprintln!(
            "FAIL {} {}: statistic {} > threshold {}{}",
            r.experiment_id,
            r.check,
            r.statistic,
            r.threshold,
            r.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default()
        );
    }
    Ok(rows.iter().all(|r| r.pass))
}
