//! `superosc <scenario> --config <path> [--out <dir>] [--seed <u64>] [--threads <n>]`
//!
//! Exit status: 0 when every gate passes, 1 on a gate failure or a
//! computation error, 2 on a configuration error or unknown scenario.

mod config;
mod report;
mod scenarios;
mod table;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{CommandFactory, Parser};

use config::{ExperimentConfig, Overrides, Scenario};
use report::Report;
use table::Artifact;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Compute(#[from] superosc_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("artifact error: {0}")]
    Artifact(String),
    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Parser, Debug)]
#[command(name = "superosc", version, about = "Plane-wave and superoscillation evolution experiments under δ and δ′ potentials")]
struct Cli {
    /// Scenario to run
    #[arg(value_enum)]
    scenario: Scenario,
    /// JSON experiment document
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the `out` key)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomized suites (overrides the `seed` key)
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (overrides SUPEROSC_THREADS and the `threads` key)
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            // clap's own message, followed by the usage line
            let _ = e.print();
            eprintln!("\n{}", Cli::command().render_usage());
            return ExitCode::from(2);
        }
        Err(e) => e.exit(),
    };
    let flags = Overrides { out: cli.out, seed: cli.seed, threads: cli.threads };
    let cfg = match ExperimentConfig::load(cli.scenario, &cli.config, flags) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("superosc: {e}");
            eprintln!("{}", Cli::command().render_usage());
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Config(msg)) => {
            eprintln!("superosc: configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("superosc: {e}");
            ExitCode::from(1)
        }
    }
}

/// Runs the scenario, writes its artifacts and returns whether every gate
/// passed.  The verdict is computed from the CSV as read back from disk.
fn run(cfg: &ExperimentConfig) -> Result<bool, CliError> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    let name = cfg.scenario.name();
    let csv_path = cfg.out_dir.join(format!("{name}.csv"));
    let report_path = cfg.out_dir.join(format!("{name}.report.json"));
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build()?;

    let start = Instant::now();
    let computed = match scenarios::compute(cfg, &pool) {
        Ok(c) => c,
        Err(CliError::Config(msg)) => return Err(CliError::Config(msg)),
        Err(e) => {
            let report = Report {
                scenario: name,
                passed: false,
                verdict_source: "none: computation failed".into(),
                config: cfg,
                gates: Vec::new(),
                residuals: serde_json::Value::Null,
                timings: BTreeMap::from([("compute_s".to_owned(), start.elapsed().as_secs_f64())]),
                artifacts: Vec::new(),
                error: Some(e.to_string()),
            };
            report.write(&report_path)?;
            return Err(e);
        }
    };
    let mut timings: BTreeMap<String, f64> = computed.timings.into_iter().collect();
    timings.insert("compute_s".into(), start.elapsed().as_secs_f64());
    computed.table.write(&csv_path)?;

    let artifact = Artifact::read(&csv_path)?;
    if artifact.len() != computed.table.len() {
        return Err(CliError::Artifact(format!("{} rows written, {} read back", computed.table.len(), artifact.len())));
    }
    let (gates, residuals) = scenarios::judge(cfg, &artifact)?;
    let passed = !gates.is_empty() && gates.iter().all(|g| g.passed);
    let mut artifacts = vec![csv_path.display().to_string()];
    artifacts.extend(computed.artifacts.iter().map(|p| p.display().to_string()));
    for g in gates.iter().filter(|g| !g.passed) {
        eprintln!("gate failed: {} = {:e} (required {})", g.name, g.value, g.requirement);
    }
    let report = Report {
        scenario: name,
        passed,
        verdict_source: csv_path.display().to_string(),
        config: cfg,
        gates,
        residuals,
        timings,
        artifacts,
        error: None,
    };
    report.write(&report_path)?;
    println!("{name}: {}", if passed { "pass" } else { "FAIL" });
    Ok(passed)
}
