//! Λ identity table on a polar grid |z| ≤ radius plus the large-|z| decay
//! along the rays arg z ∈ {0, ±π/4}.
//!
//! Rows: `check,re,im,lambda_re,lambda_im,residual` with `check` one of
//! `reflection` (|Λ(z) + Λ(−z) − 2e^{z²}| / (1 + |2e^{z²}|), Λ(−z) summed
//! directly from the power series so both sides come from different
//! routes), `derivative` (|Λ′(z) − D₄Λ(z)| / (1 + |2zΛ(z)| + 2/√π) with a
//! fourth-order central difference evaluated in double-double) and
//! `asymptotic` (|z|²·|Λ(z) − 1/(√π z)|).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::ThreadPool;
use superosc_core::lambda::{lambda, lambda_derivative, lambda_series, LambdaEvalConfig};
use superosc_core::scalar::{cexp, cfrom_f64};
use superosc_core::{Complex, Dd};

use super::{max_of, par_map, rows_with, Computed};
use crate::config::ExperimentConfig;
use crate::report::Gate;
use crate::table::{Artifact, Cell, Table};
use crate::CliError;

const HEADER: [&str; 6] = ["check", "re", "im", "lambda_re", "lambda_im", "residual"];
const FD_STEP: f64 = 1e-4;
pub const ASYMPTOTIC_RADII: [f64; 3] = [10.0, 30.0, 100.0];
pub const RAY_ANGLES: [f64; 3] = [0.0, PI / 4.0, -PI / 4.0];

struct Settings {
    radius: f64,
    radial: usize,
    angular: usize,
    tolerance: f64,
}

fn settings(cfg: &ExperimentConfig) -> Settings {
    let p = &cfg.parameters;
    Settings {
        radius: p.radius.unwrap_or(3.0),
        radial: p.radial_points.unwrap_or(25),
        angular: p.angular_points.unwrap_or(40),
        tolerance: p.tolerance.unwrap_or(1e-12),
    }
}

/// radius·i/radial for i = 1..=radial at `angular` equally spaced angles.
fn polar_grid(s: &Settings) -> Vec<Complex<f64>> {
    let mut pts = Vec::with_capacity(s.radial * s.angular);
    for i in 1..=s.radial {
        let r = s.radius * i as f64 / s.radial as f64;
        for j in 0..s.angular {
            pts.push(Complex::from_polar(r, 2.0 * PI * j as f64 / s.angular as f64));
        }
    }
    pts
}

fn fd_derivative(z: Complex<f64>) -> Result<Complex<f64>, CliError> {
    let cfg = LambdaEvalConfig::for_type::<Dd>();
    let zd: Complex<Dd> = cfrom_f64(z);
    let h = Dd::from_f64(FD_STEP);
    let f = |s: f64| lambda(zd + Complex::new(h * Dd::from_f64(s), Dd::from_f64(0.0)), &cfg);
    let d = (f(-2.0)? - f(2.0)? + (f(1.0)? - f(-1.0)?) * Dd::from_f64(8.0)) / (h * Dd::from_f64(12.0));
    Ok(Complex::new(d.re.to_f64(), d.im.to_f64()))
}

fn row(check: &str, z: Complex<f64>, l: Complex<f64>, residual: f64) -> Vec<Cell> {
    vec![check.into(), z.re.into(), z.im.into(), l.re.into(), l.im.into(), residual.into()]
}

pub fn compute(cfg: &ExperimentConfig, pool: &ThreadPool) -> Result<Computed, CliError> {
    let s = settings(cfg);
    let lcfg = LambdaEvalConfig::default();
    let grid = polar_grid(&s);
    let identity_rows = par_map(pool, &grid, |&z| {
        let l = lambda(z, &lcfg)?;
        let two_e = cexp(z * z) * 2.0;
        let reflection = (l + lambda_series(-z, &lcfg)? - two_e).norm() / (1.0 + two_e.norm());
        let scale = 1.0 + (z * l * 2.0).norm() + 2.0 / PI.sqrt();
        let derivative = (lambda_derivative(z, &lcfg)? - fd_derivative(z)?).norm() / scale;
        Ok([row("reflection", z, l, reflection), row("derivative", z, l, derivative)])
    })?;
    let rays: Vec<Complex<f64>> = RAY_ANGLES
        .iter()
        .flat_map(|&a| ASYMPTOTIC_RADII.iter().map(move |&r| Complex::from_polar(r, a)))
        .collect();
    let asym_rows = par_map(pool, &rays, |&z| {
        let l = lambda(z, &lcfg)?;
        let lead = 1.0 / (PI.sqrt() * z);
        Ok(row("asymptotic", z, l, z.norm_sqr() * (l - lead).norm()))
    })?;
    let mut table = Table::new(&HEADER);
    for pair in identity_rows {
        for r in pair {
            table.push(r);
        }
    }
    for r in asym_rows {
        table.push(r);
    }
    Ok(Computed::table(table))
}

pub fn judge(cfg: &ExperimentConfig, artifact: &Artifact) -> Result<(Vec<Gate>, serde_json::Value), CliError> {
    let s = settings(cfg);
    let residuals = |check: &str| -> Result<Vec<f64>, CliError> { rows_with(artifact, check).map(|r| r.num("residual")).collect() };
    let reflection = residuals("reflection")?;
    let derivative = residuals("derivative")?;
    let expected = s.radial * s.angular;
    let mut gates = vec![
        Gate::holds("grid_points", reflection.len() as f64, format!("== {expected}"), reflection.len() == expected && derivative.len() == expected),
        Gate::at_most("reflection_max", max_of(reflection.iter().copied()), s.tolerance),
        Gate::at_most("derivative_max", max_of(derivative.iter().copied()), s.tolerance),
    ];
    // group the asymptotic rows by ray, in order of increasing |z|
    let mut rays: BTreeMap<i64, Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows_with(artifact, "asymptotic") {
        let (re, im) = (r.num("re")?, r.num("im")?);
        let key = (im.atan2(re) * 1e6).round() as i64;
        rays.entry(key).or_default().push((re.hypot(im), r.num("residual")?));
    }
    let mut variation = serde_json::Map::new();
    for (key, mut pts) in rays {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let first = pts[0].1;
        let worst = max_of(pts.iter().map(|p| p.1 / first));
        let angle = key as f64 * 1e-6;
        // bounded: no later radius exceeds the scaled error at the first one
        gates.push(Gate::at_most(format!("asymptotic_bounded arg={angle:.6}"), worst, 1.0));
        let lo = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        variation.insert(format!("{angle:.6}"), (max_of(pts.iter().map(|p| p.1)) / lo).into());
    }
    let summary = serde_json::json!({
        "reflection_max": max_of(reflection.iter().copied()),
        "derivative_max": max_of(derivative.iter().copied()),
        "asymptotic_variation_by_ray": variation,
    });
    Ok((gates, summary))
}
