//! Tabulates Ψ(t, x; k), or with `n` set the superposition Ψ_n for
//! F_n(x) = (cos(x/n) + ik sin(x/n))ⁿ evaluated in triple-double.
//!
//! Rows: `t,x,side,re,im,abs2`.  `side` is `none` except at x = 0 under
//! δ′, where the two one-sided limits are written as `left` and `right`.

use rayon::ThreadPool;
use superosc_core::evolution::{PointEvaluator, PotentialKind, PotentialSpec, Side, SpaceTimePoint};
use superosc_core::superosc::{coefficients, SuperoscSpec};
use superosc_core::{Complex, Real, Td};

use super::{check_cancellation, config_err, par_map, Computed};
use crate::config::ExperimentConfig;
use crate::report::Gate;
use crate::table::{Artifact, Cell, Table};
use crate::CliError;

const HEADER: [&str; 6] = ["t", "x", "side", "re", "im", "abs2"];

fn xs(cfg: &ExperimentConfig) -> Result<Vec<f64>, CliError> {
    let p = &cfg.parameters;
    match (&p.x_list, &p.x_range) {
        (Some(list), None) => Ok(list.clone()),
        (None, Some(r)) => Ok(r.samples()),
        _ => Err(config_err("evolve needs exactly one of x_list and x_range")),
    }
}

fn evaluators<T: Real>(t: T, x: T, pot: &PotentialSpec) -> Result<Vec<(&'static str, PointEvaluator<T>)>, CliError> {
    Ok(if pot.kind() == PotentialKind::DeltaPrime && x.is_zero() {
        vec![
            ("left", PointEvaluator::at_interface(t, pot, Side::Left)?),
            ("right", PointEvaluator::at_interface(t, pot, Side::Right)?),
        ]
    } else {
        vec![("none", PointEvaluator::new(&SpaceTimePoint::new(t, x)?, pot)?)]
    })
}

pub fn compute(cfg: &ExperimentConfig, pool: &ThreadPool) -> Result<Computed, CliError> {
    let p = &cfg.parameters;
    let pot = p.require_potential()?;
    let k = p.k.ok_or_else(|| config_err("k is required"))?;
    let ts = p.t_list.clone().unwrap_or_default();
    let x_values = xs(cfg)?;
    let points: Vec<(f64, f64)> = ts.iter().flat_map(|&t| x_values.iter().map(move |&x| (t, x))).collect();
    if points.is_empty() {
        return Err(config_err("evolve needs at least one (t, x) point"));
    }
    let sum = match p.n {
        Some(n) => Some({
            check_cancellation(n, k)?;
            coefficients::<Td>(&SuperoscSpec::new(n, k).map_err(|e| config_err(e.to_string()))?)?
        }),
        None => None,
    };
    let rows = par_map(pool, &points, |&(t, x)| {
        let mut out = Vec::new();
        match &sum {
            Some(f) => {
                for (side, ev) in evaluators(Td::from_f64(t), Td::from_f64(x), &pot)? {
                    let v = ev.superposed(f)?;
                    out.push((side, Complex::new(v.re.to_f64(), v.im.to_f64())));
                }
            }
            None => {
                for (side, ev) in evaluators(t, x, &pot)? {
                    out.push((side, ev.psi(k)?));
                }
            }
        }
        let rows: Vec<Vec<Cell>> = out
            .into_iter()
            .map(|(side, v)| vec![t.into(), x.into(), side.into(), v.re.into(), v.im.into(), v.norm_sqr().into()])
            .collect();
        Ok(rows)
    })?;
    let mut table = Table::new(&HEADER);
    rows.into_iter().flatten().for_each(|r| table.push(r));
    Ok(Computed::table(table))
}

pub fn judge(cfg: &ExperimentConfig, artifact: &Artifact) -> Result<(Vec<Gate>, serde_json::Value), CliError> {
    let p = &cfg.parameters;
    let n_t = p.t_list.as_ref().map_or(0, Vec::len);
    let x_values = xs(cfg)?;
    let split = usize::from(p.potential == Some(PotentialKind::DeltaPrime));
    let expected = n_t * (x_values.len() + split * x_values.iter().filter(|x| **x == 0.0).count());
    let mut finite = 0usize;
    let mut max_abs2 = 0.0f64;
    for r in artifact.rows() {
        let (re, im, a2) = (r.num("re")?, r.num("im")?, r.num("abs2")?);
        if re.is_finite() && im.is_finite() && a2.is_finite() {
            finite += 1;
            max_abs2 = max_abs2.max(a2);
        }
    }
    let gates = vec![
        Gate::holds("rows", artifact.len() as f64, format!("== {expected}"), artifact.len() == expected),
        Gate::holds("finite_values", finite as f64, format!("== {}", artifact.len()), finite == artifact.len()),
    ];
    Ok((gates, serde_json::json!({ "points": artifact.len(), "max_abs2": max_abs2 })))
}
