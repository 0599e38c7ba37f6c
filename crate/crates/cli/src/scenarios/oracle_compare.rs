//! Crank–Nicolson against the quadrature superposition of the analytic
//! plane-wave solutions, on a ladder of grids refined by 2 in h and dt.
//!
//! Rows: `level,n_x,dt,h,error,wall_amplitude,norm_drift`.  The final
//! state at the default level is also written as
//! `oracle-compare.snapshot.csv` (`t,x,re,im,abs2`).

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use rayon::ThreadPool;
use superosc_core::fd_oracle::{self, FdGrid, PacketSpec};

use super::{config_err, log_log_slope, par_map, Computed};
use crate::config::{ExperimentConfig, GridParams, PacketParams};
use crate::report::Gate;
use crate::table::{Artifact, Table};
use crate::CliError;

const HEADER: [&str; 7] = ["level", "n_x", "dt", "h", "error", "wall_amplitude", "norm_drift"];
pub const DEFAULT_PACKET: PacketParams = PacketParams { k0: 2.0, sigma: 0.5, x0: -3.0 };
/// Level 2 of this ladder is the default resolution (n_x = 4096, dt = 2.5e-4).
pub const BASE_GRID: GridParams = GridParams { l: 40.0, n_x: 1024, dt: 1e-3, n_t: 1000 };
pub const DEFAULT_LEVELS: [u32; 4] = [0, 1, 2, 3];
pub const DEFAULT_LEVEL: u32 = 2;
/// Largest |ψ| allowed near the Dirichlet walls.
pub const WALL_TOLERANCE: f64 = 1e-6;
pub const SNAPSHOT: &str = "oracle-compare.snapshot.csv";

struct Setup {
    packet: PacketSpec,
    base: FdGrid,
    levels: Vec<u32>,
    default_level: u32,
}

fn setup(cfg: &ExperimentConfig) -> Result<Setup, CliError> {
    let p = &cfg.parameters;
    let pk = p.packet.unwrap_or(DEFAULT_PACKET);
    let g = p.grid.unwrap_or(BASE_GRID);
    let levels = p.levels.clone().unwrap_or_else(|| DEFAULT_LEVELS.to_vec());
    let default_level = p.default_level.unwrap_or(DEFAULT_LEVEL);
    if !levels.contains(&default_level) {
        return Err(config_err(format!("default_level {default_level} is not among levels {levels:?}")));
    }
    Ok(Setup {
        packet: PacketSpec::new(pk.k0, pk.sigma, pk.x0).map_err(|e| config_err(e.to_string()))?,
        base: FdGrid::new(g.l, g.n_x, g.dt, g.n_t).map_err(|e| config_err(e.to_string()))?,
        levels,
        default_level,
    })
}

pub fn compute(cfg: &ExperimentConfig, pool: &ThreadPool) -> Result<Computed, CliError> {
    let s = setup(cfg)?;
    let pot = cfg.parameters.require_potential()?;
    let runs = par_map(pool, &s.levels, |&level| {
        let start = std::time::Instant::now();
        let grid = s.base.refined(level)?;
        let initial = fd_oracle::initial_state(&grid, &s.packet);
        let state = fd_oracle::evolve_packet(&grid, &s.packet, &pot)?;
        let error = fd_oracle::sup_error(&state, &grid, &s.packet, &pot)?;
        let drift = (fd_oracle::norm(&state, &grid) - fd_oracle::norm(&initial, &grid)).abs();
        let wall = fd_oracle::wall_amplitude(&state, &grid);
        let keep = (level == s.default_level).then_some(state);
        Ok((level, grid, error, wall, drift, keep, start.elapsed().as_secs_f64()))
    })?;
    let mut table = Table::new(&HEADER);
    let mut artifacts = Vec::new();
    let mut timings = Vec::new();
    for (level, grid, error, wall, drift, keep, secs) in runs {
        table.push(vec![level.into(), grid.n_x().into(), grid.dt().into(), grid.h().into(), error.into(), wall.into(), drift.into()]);
        timings.push((format!("level_{level}_s"), secs));
        if let Some(state) = keep {
            let path: PathBuf = cfg.out_dir.join(SNAPSHOT);
            let mut w = BufWriter::new(File::create(&path)?);
            fd_oracle::write_snapshot(&mut w, grid.total_time(), &grid, &state)?;
            artifacts.push(path);
        }
    }
    Ok(Computed { table, artifacts, timings })
}

pub fn judge(cfg: &ExperimentConfig, artifact: &Artifact) -> Result<(Vec<Gate>, serde_json::Value), CliError> {
    let s = setup(cfg)?;
    let tol = cfg.parameters.tolerance.unwrap_or(5e-3);
    let slope_tol = cfg.parameters.slope_tolerance.unwrap_or(0.4);
    let levels = artifact.column("level")?;
    let hs = artifact.column("h")?;
    let errors = artifact.column("error")?;
    let walls = artifact.column("wall_amplitude")?;
    let at_default = levels.iter().position(|&l| l == f64::from(s.default_level));
    let mut gates = vec![Gate::holds("levels", levels.len() as f64, format!("== {}", s.levels.len()), levels.len() == s.levels.len())];
    match at_default {
        Some(i) => gates.push(Gate::at_most(format!("error_at_level_{}", s.default_level), errors[i], tol)),
        None => gates.push(Gate::holds("error_at_default_level", f64::NAN, "row present", false)),
    }
    let slope = log_log_slope(&hs, &errors);
    gates.push(Gate::within("refinement_slope", slope, 2.0, slope_tol));
    let wall = walls.iter().copied().fold(0.0, f64::max);
    gates.push(Gate::at_most("wall_amplitude_max", wall, WALL_TOLERANCE));
    let observed: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    Ok((gates, serde_json::json!({ "errors": errors, "h": hs, "fitted_slope": slope, "successive_orders": observed })))
}
