//! Residual tables for the analytic solutions: interface conditions at
//! x = 0, the PDE away from it, and the initial condition as t → 0⁺.
//!
//! Rows: `check,t,k,x,h,value`.  `check` is one of
//! - the two interface residuals (`continuity`/`derivative_jump` for δ,
//!   `derivative_continuity`/`value_jump` for δ′) at step `h`;
//! - `pde`: |i∂ₜΨ + ∂ₓₓΨ| by fourth-order stencils at (t, x), in
//!   double-double, for h ∈ {1e-2, 5e-3, 2.5e-3, 1.25e-3};
//! - `initial`: sup over x ∈ {±0.5, ±1, ±2} of |Ψ(t,x;k) − e^{ikx}| for
//!   t ∈ {1e-2, 1e-4, 1e-6}.

use rayon::ThreadPool;
use superosc_core::evolution::{jump_residuals, pde_residual, psi, PotentialKind, SpaceTimePoint};
use superosc_core::{Complex, Dd};

use super::{config_err, log_log_slope, max_of, par_map, rows_with, Computed};
use crate::config::ExperimentConfig;
use crate::report::Gate;
use crate::table::{Artifact, Cell, Table};
use crate::CliError;

const HEADER: [&str; 6] = ["check", "t", "k", "x", "h", "value"];
pub const PDE_STEPS: [f64; 4] = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
pub const INITIAL_TIMES: [f64; 3] = [1e-2, 1e-4, 1e-6];
pub const INITIAL_XS: [f64; 6] = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];
/// sup |Ψ − e^{ikx}| required at the smallest initial time.
pub const INITIAL_TOLERANCE: f64 = 1e-3;

fn interface_names(kind: PotentialKind) -> [&'static str; 2] {
    match kind {
        PotentialKind::Delta => ["continuity", "derivative_jump"],
        PotentialKind::DeltaPrime => ["derivative_continuity", "value_jump"],
    }
}

enum Item {
    Interface(f64, f64),
    Pde(f64, f64),
    Initial(f64, f64),
}

pub fn compute(cfg: &ExperimentConfig, pool: &ThreadPool) -> Result<Computed, CliError> {
    let p = &cfg.parameters;
    let pot = p.require_potential()?;
    let h = p.h.unwrap_or(1e-4);
    let x = p.x.unwrap_or(1.0);
    let ts = p.t_list.clone().unwrap_or_default();
    let ks = p.k_list.clone().unwrap_or_default();
    if ts.iter().any(|&t| t <= 2.0 * PDE_STEPS[0]) {
        return Err(config_err(format!("the PDE stencils need every t > {}", 2.0 * PDE_STEPS[0])));
    }
    if x.abs() <= 4.0 * PDE_STEPS[0] {
        return Err(config_err(format!("the PDE stencils need |x| > {}", 4.0 * PDE_STEPS[0])));
    }
    let mut items = Vec::new();
    for &t in &ts {
        for &k in &ks {
            items.push(Item::Interface(t, k));
            items.push(Item::Pde(t, k));
        }
    }
    for &k in &ks {
        for &t in &INITIAL_TIMES {
            items.push(Item::Initial(t, k));
        }
    }
    let names = interface_names(pot.kind());
    let rows = par_map(pool, &items, |item| -> Result<Vec<Vec<Cell>>, CliError> {
        Ok(match *item {
            Item::Interface(t, k) => {
                let (a, b) = jump_residuals(t, k, &pot, h)?;
                vec![
                    vec![names[0].into(), t.into(), k.into(), Cell::Empty, h.into(), a.into()],
                    vec![names[1].into(), t.into(), k.into(), Cell::Empty, h.into(), b.into()],
                ]
            }
            Item::Pde(t, k) => {
                let pt = SpaceTimePoint::<Dd>::from_f64(t, x)?;
                let mut out = Vec::new();
                for hh in PDE_STEPS {
                    let d = Dd::from_f64(hh);
                    let r = pde_residual(&pt, Dd::from_f64(k), &pot, d, d)?.to_f64();
                    out.push(vec!["pde".into(), t.into(), k.into(), x.into(), hh.into(), r.into()]);
                }
                out
            }
            Item::Initial(t, k) => {
                let mut sup = 0.0f64;
                for xx in INITIAL_XS {
                    let v = psi(&SpaceTimePoint::new(t, xx)?, k, &pot)?;
                    sup = max_of([sup, (v - Complex::from_polar(1.0, k * xx)).norm()]);
                }
                vec![vec!["initial".into(), t.into(), k.into(), Cell::Empty, Cell::Empty, sup.into()]]
            }
        })
    })?;
    let mut table = Table::new(&HEADER);
    rows.into_iter().flatten().for_each(|r| table.push(r));
    Ok(Computed::table(table))
}

pub fn judge(cfg: &ExperimentConfig, artifact: &Artifact) -> Result<(Vec<Gate>, serde_json::Value), CliError> {
    let p = &cfg.parameters;
    let tol = p.tolerance.unwrap_or(1e-6);
    let slope_tol = p.slope_tolerance.unwrap_or(0.3);
    let kind = p.potential.ok_or_else(|| config_err("potential is required"))?;
    let combos = p.t_list.as_ref().map_or(0, Vec::len) * p.k_list.as_ref().map_or(0, Vec::len);
    let mut gates = Vec::new();
    let mut summary = serde_json::Map::new();
    for name in interface_names(kind) {
        let v: Vec<f64> = rows_with(artifact, name).map(|r| r.num("value")).collect::<Result<_, _>>()?;
        gates.push(Gate::holds(format!("{name}_samples"), v.len() as f64, format!("== {combos}"), v.len() == combos));
        gates.push(Gate::at_most(format!("{name}_max"), max_of(v.iter().copied()), tol));
        summary.insert(format!("{name}_max"), max_of(v).into());
    }
    // PDE: one slope per (t, k), rows come in blocks of PDE_STEPS
    let pde: Vec<_> = rows_with(artifact, "pde").collect();
    let mut slopes = Vec::new();
    for block in pde.chunks(PDE_STEPS.len()) {
        let (t, k) = (block[0].num("t")?, block[0].num("k")?);
        let hs: Vec<f64> = block.iter().map(|r| r.num("h")).collect::<Result<_, _>>()?;
        let rs: Vec<f64> = block.iter().map(|r| r.num("value")).collect::<Result<_, _>>()?;
        let slope = log_log_slope(&hs, &rs);
        gates.push(Gate::within(format!("pde_slope t={t} k={k}"), slope, 4.0, slope_tol));
        slopes.push(serde_json::json!({ "t": t, "k": k, "slope": slope, "residuals": rs }));
    }
    gates.push(Gate::holds("pde_blocks", (pde.len() / PDE_STEPS.len()) as f64, format!("== {combos}"), pde.len() == combos * PDE_STEPS.len()));
    summary.insert("pde".into(), slopes.into());
    // initial condition: per k, nonincreasing as t → 0⁺ and small at the end
    let init: Vec<_> = rows_with(artifact, "initial").collect();
    let mut initial = Vec::new();
    for block in init.chunks(INITIAL_TIMES.len()) {
        let k = block[0].num("k")?;
        let sups: Vec<f64> = block.iter().map(|r| r.num("value")).collect::<Result<_, _>>()?;
        let monotone = sups.windows(2).all(|w| w[1] <= w[0]);
        let last = *sups.last().unwrap_or(&f64::NAN);
        gates.push(Gate::holds(
            format!("initial_condition k={k}"),
            last,
            format!("nonincreasing as t → 0⁺ and <= {INITIAL_TOLERANCE:e}"),
            monotone && last <= INITIAL_TOLERANCE,
        ));
        initial.push(serde_json::json!({ "k": k, "sup_by_t": sups }));
    }
    summary.insert("initial".into(), initial.into());
    Ok((gates, serde_json::Value::Object(summary)))
}
