//! sup over a compact K of |Ψ_n − Ψ| for the superoscillating data F_n,
//! evaluated in triple-double.
//!
//! Rows: `t,x,n,error`.  Gates: the sup is nonincreasing along `n_list`
//! and the last sup is below `threshold`.

use rayon::ThreadPool;
use superosc_core::evolution::{superposition_errors, PotentialKind};
use superosc_core::superosc::{coefficients, SuperoscSpec};
use superosc_core::Td;

use super::{check_cancellation, config_err, max_of, par_map, Computed};
use crate::config::{ExperimentConfig, Range};
use crate::report::Gate;
use crate::table::{Artifact, Table};
use crate::CliError;

const HEADER: [&str; 4] = ["t", "x", "n", "error"];
pub const DEFAULT_T: Range = Range { min: 0.5, max: 2.0, points: 21 };
pub const DEFAULT_X: Range = Range { min: -3.0, max: 3.0, points: 61 };

/// sup_K |Ψ_80 − Ψ| for k = 2 on the default K from a 50-digit run, by
/// (potential, strength).
pub const CALIBRATED_N80: [(PotentialKind, f64, f64); 4] = [
    (PotentialKind::Delta, 1.0, 6.274610257162751),
    (PotentialKind::Delta, -1.0, 6.660182542553865),
    (PotentialKind::DeltaPrime, 1.0, 6.642493812988916),
    (PotentialKind::DeltaPrime, -1.0, 7.012457467088619),
];
/// Headroom over the calibrated sup.
pub const CALIBRATION_MARGIN: f64 = 1.05;

fn threshold(cfg: &ExperimentConfig) -> Result<f64, CliError> {
    let p = &cfg.parameters;
    if let Some(t) = p.threshold {
        return Ok(t);
    }
    let default_k = p.t_range.unwrap_or(DEFAULT_T) == DEFAULT_T && p.x_range.unwrap_or(DEFAULT_X) == DEFAULT_X;
    let last_n = p.n_list.as_ref().and_then(|v| v.last().copied());
    if default_k && p.k == Some(2.0) && last_n == Some(80) {
        if let Some(&(_, _, sup)) = CALIBRATED_N80.iter().find(|(kind, s, _)| Some(*kind) == p.potential && Some(*s) == p.strength) {
            return Ok(CALIBRATION_MARGIN * sup);
        }
    }
    Err(config_err("no calibrated threshold for this configuration; give 'threshold'"))
}

pub fn compute(cfg: &ExperimentConfig, pool: &ThreadPool) -> Result<Computed, CliError> {
    let p = &cfg.parameters;
    threshold(cfg)?;
    let pot = p.require_potential()?;
    let k = p.k.ok_or_else(|| config_err("k is required"))?;
    let ns = p.n_list.clone().unwrap_or_default();
    let mut sums = Vec::with_capacity(ns.len());
    for &n in &ns {
        check_cancellation(n, k)?;
        let spec = SuperoscSpec::new(n, k).map_err(|e| config_err(e.to_string()))?;
        sums.push(coefficients::<Td>(&spec)?);
    }
    let ts = p.t_range.unwrap_or(DEFAULT_T).samples();
    let xs = p.x_range.unwrap_or(DEFAULT_X).samples();
    let points: Vec<(f64, f64)> = ts.iter().flat_map(|&t| xs.iter().map(move |&x| (t, x))).collect();
    let kk = Td::from_f64(k);
    let errors = par_map(pool, &points, |&(t, x)| {
        let e = superposition_errors(Td::from_f64(t), Td::from_f64(x), kk, &pot, &sums)?;
        Ok(e.into_iter().map(|v| v.to_f64()).collect::<Vec<f64>>())
    })?;
    let mut table = Table::new(&HEADER);
    for (&(t, x), errs) in points.iter().zip(errors) {
        for (&n, e) in ns.iter().zip(errs) {
            table.push(vec![t.into(), x.into(), n.into(), e.into()]);
        }
    }
    Ok(Computed::table(table))
}

pub fn judge(cfg: &ExperimentConfig, artifact: &Artifact) -> Result<(Vec<Gate>, serde_json::Value), CliError> {
    let p = &cfg.parameters;
    let ns = p.n_list.clone().unwrap_or_default();
    let limit = threshold(cfg)?;
    let points = p.t_range.unwrap_or(DEFAULT_T).points * p.x_range.unwrap_or(DEFAULT_X).points;
    let mut sups = vec![f64::NEG_INFINITY; ns.len()];
    let mut counts = vec![0usize; ns.len()];
    for r in artifact.rows() {
        let n = r.num("n")? as usize;
        let i = ns.iter().position(|&m| m == n).ok_or_else(|| CliError::Artifact(format!("unexpected n = {n}")))?;
        sups[i] = max_of([sups[i], r.num("error")?]);
        counts[i] += 1;
    }
    let complete = counts.iter().all(|&c| c == points);
    let worst_ratio = max_of(sups.windows(2).map(|w| w[1] / w[0]));
    let mut gates = vec![Gate::holds("samples_per_n", points as f64, format!("== {points} for every n"), complete)];
    if ns.len() >= 2 {
        gates.push(Gate::at_most("sup_nonincreasing (max successive ratio)", worst_ratio, 1.0));
    }
    if let (Some(&n), Some(&sup)) = (ns.last(), sups.last()) {
        gates.push(Gate::at_most(format!("sup_below_threshold n={n}"), sup, limit));
    }
    let by_n: serde_json::Map<String, serde_json::Value> = ns.iter().zip(&sups).map(|(n, s)| (n.to_string(), (*s).into())).collect();
    Ok((gates, serde_json::json!({ "sup_error_by_n": by_n, "threshold": limit })))
}
