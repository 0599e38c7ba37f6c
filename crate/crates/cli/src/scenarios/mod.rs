//! Scenario drivers.  Each one has a `compute` half that produces the CSV
//! rows and a `judge` half that derives the gates from the CSV alone.

mod asymptote;
mod converge;
mod evolve;
mod lambda_table;
mod operator_check;
mod oracle_compare;
mod verify;

use std::path::PathBuf;

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::config::{ExperimentConfig, Scenario};
use crate::report::Gate;
use crate::table::{Artifact, Table};
use crate::CliError;

pub struct Computed {
    pub table: Table,
    /// Extra files written next to the CSV.
    pub artifacts: Vec<PathBuf>,
    pub timings: Vec<(String, f64)>,
}

impl Computed {
    fn table(table: Table) -> Self {
        Self { table, artifacts: Vec::new(), timings: Vec::new() }
    }
}

pub fn compute(cfg: &ExperimentConfig, pool: &ThreadPool) -> Result<Computed, CliError> {
    match cfg.scenario {
        Scenario::LambdaTable => lambda_table::compute(cfg, pool),
        Scenario::Evolve => evolve::compute(cfg, pool),
        Scenario::Converge => converge::compute(cfg, pool),
        Scenario::Asymptote => asymptote::compute(cfg, pool),
        Scenario::Verify => verify::compute(cfg, pool),
        Scenario::OracleCompare => oracle_compare::compute(cfg, pool),
        Scenario::OperatorCheck => operator_check::compute(cfg, pool),
    }
}

pub fn judge(cfg: &ExperimentConfig, artifact: &Artifact) -> Result<(Vec<Gate>, serde_json::Value), CliError> {
    match cfg.scenario {
        Scenario::LambdaTable => lambda_table::judge(cfg, artifact),
        Scenario::Evolve => evolve::judge(cfg, artifact),
        Scenario::Converge => converge::judge(cfg, artifact),
        Scenario::Asymptote => asymptote::judge(cfg, artifact),
        Scenario::Verify => verify::judge(cfg, artifact),
        Scenario::OracleCompare => oracle_compare::judge(cfg, artifact),
        Scenario::OperatorCheck => operator_check::judge(cfg, artifact),
    }
}

/// Maps `f` over `items` on the worker pool, keeping input order.
fn par_map<I, O, F>(pool: &ThreadPool, items: &[I], f: F) -> Result<Vec<O>, CliError>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> Result<O, CliError> + Sync,
{
    pool.install(|| items.par_iter().map(&f).collect())
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::NEG_INFINITY, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

/// Least-squares slope of log(y) against log(x).
fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Rows whose `check` column equals `name`.
fn rows_with<'a>(artifact: &'a Artifact, name: &'a str) -> impl Iterator<Item = crate::table::Row<'a>> + 'a {
    artifact.rows().filter(move |r| r.text("check").map(|c| c == name).unwrap_or(false))
}

/// Decimal digits the superposition F_n at wavenumber k cancels
/// (Σ|C_j| = |k|ⁿ); triple-double keeps ~48.
const MAX_CANCELLED_DIGITS: f64 = 32.0;

fn check_cancellation(n: usize, k: f64) -> Result<(), CliError> {
    let digits = n as f64 * k.abs().max(1.0).log10();
    if digits > MAX_CANCELLED_DIGITS {
        return Err(config_err(format!(
            "n = {n}, k = {k} cancels {digits:.0} digits, beyond the {MAX_CANCELLED_DIGITS} supported in triple-double"
        )));
    }
    Ok(())
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let xs = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
        let ys: Vec<f64> = xs.iter().map(|h: &f64| 3.0 * h.powi(4)).collect();
        assert!((log_log_slope(&xs, &ys) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn max_propagates_nan() {
        assert_eq!(max_of([1.0, 3.0, 2.0]), 3.0);
        assert!(max_of([1.0, f64::NAN, 2.0]).is_nan());
    }
}
