//! Large-time forms: err(t) = |Ψ(t,x;k) − asymptotic(t,x;k)| and the
//! scaled error t^exponent·err(t) (exponent 1 by default).
//!
//! Rows: `k,x,t,error,scaled`.  Gate, per (k, x): the scaled error stays
//! bounded, i.e. max_t scaled(t) / scaled(t₀) < variation_limit with t₀
//! the first time in `t_list`.  The two-sided variation max/min is
//! reported alongside.

use std::collections::BTreeMap;

use rayon::ThreadPool;
use superosc_core::evolution::{asymptotic, psi, PotentialKind, SpaceTimePoint};

use super::{config_err, max_of, par_map, Computed};
use crate::config::ExperimentConfig;
use crate::report::Gate;
use crate::table::{Artifact, Table};
use crate::CliError;

const HEADER: [&str; 5] = ["k", "x", "t", "error", "scaled"];
pub const DEFAULT_TIMES: [f64; 4] = [10.0, 1e2, 1e3, 1e4];

fn times(cfg: &ExperimentConfig) -> Vec<f64> {
    cfg.parameters.t_list.clone().unwrap_or_else(|| DEFAULT_TIMES.to_vec())
}

pub fn compute(cfg: &ExperimentConfig, pool: &ThreadPool) -> Result<Computed, CliError> {
    let p = &cfg.parameters;
    let pot = p.require_potential()?;
    let exponent = p.exponent.unwrap_or(1.0);
    let ks = p.k_list.clone().unwrap_or_default();
    let xs = p.x_list.clone().unwrap_or_default();
    if pot.kind() == PotentialKind::DeltaPrime && xs.contains(&0.0) {
        return Err(config_err("the δ′ large-time form needs x ≠ 0"));
    }
    let ts = times(cfg);
    let mut items = Vec::with_capacity(ks.len() * xs.len() * ts.len());
    for &k in &ks {
        for &x in &xs {
            items.extend(ts.iter().map(|&t| (k, x, t)));
        }
    }
    let errors = par_map(pool, &items, |&(k, x, t)| {
        let pt = SpaceTimePoint::new(t, x)?;
        Ok((psi(&pt, k, &pot)? - asymptotic(&pt, k, &pot)?).norm())
    })?;
    let mut table = Table::new(&HEADER);
    for (&(k, x, t), e) in items.iter().zip(errors) {
        table.push(vec![k.into(), x.into(), t.into(), e.into(), (t.powf(exponent) * e).into()]);
    }
    Ok(Computed::table(table))
}

pub fn judge(cfg: &ExperimentConfig, artifact: &Artifact) -> Result<(Vec<Gate>, serde_json::Value), CliError> {
    let limit = cfg.parameters.variation_limit.unwrap_or(5.0);
    let n_t = times(cfg).len();
    // (k, x) in file order, keyed by their bit patterns
    let mut groups: BTreeMap<(usize, u64, u64), Vec<(f64, f64)>> = BTreeMap::new();
    let mut order = Vec::new();
    for r in artifact.rows() {
        let (k, x) = (r.num("k")?, r.num("x")?);
        let key = (k.to_bits(), x.to_bits());
        let idx = match order.iter().position(|o| *o == key) {
            Some(i) => i,
            None => {
                order.push(key);
                order.len() - 1
            }
        };
        groups.entry((idx, key.0, key.1)).or_default().push((r.num("t")?, r.num("scaled")?));
    }
    let mut gates = Vec::new();
    let mut summary = Vec::new();
    for ((_, kb, xb), pts) in groups {
        let (k, x) = (f64::from_bits(kb), f64::from_bits(xb));
        let first = pts[0].1;
        let upper = max_of(pts.iter().map(|p| p.1 / first));
        let lo = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let variation = max_of(pts.iter().map(|p| p.1)) / lo;
        gates.push(Gate::holds(format!("samples k={k} x={x}"), pts.len() as f64, format!("== {n_t}"), pts.len() == n_t));
        gates.push(Gate::below(format!("scaled_error_bounded k={k} x={x}"), upper, limit));
        summary.push(serde_json::json!({ "k": k, "x": x, "upper_ratio": upper, "variation": variation, "scaled": pts.iter().map(|p| p.1).collect::<Vec<_>>() }));
    }
    Ok((gates, serde_json::json!({ "combinations": summary })))
}
