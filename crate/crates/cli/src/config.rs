//! Experiment configuration: one JSON document, command-line flags on top.
//!
//! ```json
//! { "scenario": "verify",
//!   "parameters": { "potential": "delta_prime", "strength": -1.0,
//!                   "t_list": [1.0], "k_list": [2.0] } }
//! ```

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use superosc_core::evolution::{PotentialKind, PotentialSpec};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    LambdaTable,
    Evolve,
    Converge,
    Asymptote,
    Verify,
    OracleCompare,
    OperatorCheck,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::LambdaTable => "lambda-table",
            Scenario::Evolve => "evolve",
            Scenario::Converge => "converge",
            Scenario::Asymptote => "asymptote",
            Scenario::Verify => "verify",
            Scenario::OracleCompare => "oracle-compare",
            Scenario::OperatorCheck => "operator-check",
        }
    }

    /// Keys that must be present.
    fn required(self) -> &'static [&'static str] {
        match self {
            Scenario::LambdaTable | Scenario::OperatorCheck => &[],
            Scenario::Evolve => &["potential", "strength", "k", "t_list"],
            Scenario::Converge => &["potential", "strength", "k", "n_list"],
            Scenario::Asymptote => &["potential", "strength", "k_list", "x_list"],
            Scenario::Verify => &["potential", "strength", "t_list", "k_list"],
            Scenario::OracleCompare => &["potential", "strength"],
        }
    }

    /// Keys the scenario reads besides the required ones.
    fn optional(self) -> &'static [&'static str] {
        match self {
            Scenario::LambdaTable => &["radius", "radial_points", "angular_points", "tolerance"],
            Scenario::Evolve => &["n", "x_list", "x_range"],
            Scenario::Converge => &["t_range", "x_range", "threshold"],
            Scenario::Asymptote => &["t_list", "variation_limit", "exponent"],
            Scenario::Verify => &["h", "x", "tolerance", "slope_tolerance"],
            Scenario::OracleCompare => &["packet", "grid", "levels", "default_level", "tolerance", "slope_tolerance"],
            Scenario::OperatorCheck => &[
                "potential",
                "strength",
                "cases",
                "m_terms",
                "series_len",
                "b",
                "tolerance",
                "quotient_tolerance",
            ],
        }
    }
}

const COMMON_KEYS: [&str; 3] = ["out", "seed", "threads"];

/// Evenly spaced samples `min, …, max` (`points` of them).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Range {
    pub fn samples(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        // scale before dividing so symmetric ranges hit 0 exactly
        let span = self.max - self.min;
        let last = (self.points - 1) as f64;
        (0..self.points).map(|i| self.min + span * i as f64 / last).collect()
    }

    fn validate(&self, key: &str) -> Result<(), CliError> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min <= self.max && self.points >= 1) {
            return Err(CliError::Config(format!("{key}: need finite min ≤ max and points ≥ 1")));
        }
        if self.points == 1 && self.min != self.max {
            return Err(CliError::Config(format!("{key}: a single point needs min = max")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketParams {
    pub k0: f64,
    pub sigma: f64,
    pub x0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    pub l: f64,
    pub n_x: usize,
    pub dt: f64,
    pub n_t: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strength: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_range: Option<Range>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_range: Option<Range>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radial_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angular_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient_tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variation_limit: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub packet: Option<PacketParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub default_level: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_terms: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series_len: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    scenario: Option<Scenario>,
    #[serde(default)]
    parameters: serde_json::Map<String, serde_json::Value>,
}

/// A validated experiment: scenario plus the merged parameters.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub parameters: Parameters,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub threads: usize,
}

/// Values given on the command line; `None` leaves the config key alone.
#[derive(Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

pub const THREADS_ENV: &str = "SUPEROSC_THREADS";

impl ExperimentConfig {
    pub fn load(scenario: Scenario, path: &Path, flags: Overrides) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let file: ConfigFile =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if let Some(s) = file.scenario {
            if s != scenario {
                return Err(CliError::Config(format!(
                    "config is for scenario '{}' but '{}' was requested",
                    s.name(),
                    scenario.name()
                )));
            }
        }
        let keys: BTreeSet<&str> = file.parameters.keys().map(String::as_str).collect();
        Self::from_parameters(scenario, serde_json::Value::Object(file.parameters.clone()), &keys, flags)
    }

    fn from_parameters(
        scenario: Scenario,
        raw: serde_json::Value,
        keys: &BTreeSet<&str>,
        flags: Overrides,
    ) -> Result<Self, CliError> {
        for key in keys {
            if !(scenario.required().contains(key) || scenario.optional().contains(key) || COMMON_KEYS.contains(key)) {
                return Err(CliError::Config(format!("key '{key}' is not used by scenario '{}'", scenario.name())));
            }
        }
        for key in scenario.required() {
            if !keys.contains(key) {
                return Err(CliError::Config(format!("scenario '{}' needs key '{key}'", scenario.name())));
            }
        }
        let mut parameters: Parameters =
            serde_json::from_value(raw).map_err(|e| CliError::Config(format!("parameters: {e}")))?;
        if flags.out.is_some() {
            parameters.out = flags.out;
        }
        if flags.seed.is_some() {
            parameters.seed = flags.seed;
        }
        let env_threads = match std::env::var(THREADS_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?,
            ),
            Err(_) => None,
        };
        if let Some(t) = flags.threads.or(env_threads) {
            parameters.threads = Some(t);
        }
        validate(&parameters)?;
        let threads = match parameters.threads {
            Some(t) => t,
            None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        };
        Ok(Self {
            scenario,
            out_dir: parameters.out.clone().unwrap_or_else(|| PathBuf::from(".")),
            seed: parameters.seed.unwrap_or(0),
            threads,
            parameters,
        })
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn check(cond: bool, msg: &str) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(config_err(msg))
    }
}

fn positive(v: Option<f64>, key: &str) -> Result<(), CliError> {
    match v {
        Some(v) if !(v > 0.0 && v.is_finite()) => Err(config_err(format!("{key} must be positive and finite, got {v}"))),
        _ => Ok(()),
    }
}

/// Range checks mirroring the module preconditions.
fn validate(p: &Parameters) -> Result<(), CliError> {
    if let Some(s) = p.strength {
        check(s.is_finite() && s != 0.0, "strength must be finite and nonzero")?;
    }
    if let Some(k) = p.k {
        check(k.is_finite(), "k must be finite")?;
    }
    if let Some(ks) = &p.k_list {
        check(!ks.is_empty() && ks.iter().all(|k| k.is_finite()), "k_list must be a nonempty list of finite numbers")?;
    }
    if let Some(ts) = &p.t_list {
        check(!ts.is_empty() && ts.iter().all(|t| *t > 0.0 && t.is_finite()), "t_list must be nonempty with every t > 0")?;
    }
    if let Some(xs) = &p.x_list {
        check(!xs.is_empty() && xs.iter().all(|x| x.is_finite()), "x_list must be a nonempty list of finite numbers")?;
    }
    if let Some(r) = &p.t_range {
        r.validate("t_range")?;
        check(r.min > 0.0, "t_range needs min > 0")?;
    }
    if let Some(r) = &p.x_range {
        r.validate("x_range")?;
    }
    if let Some(n) = p.n {
        check(n >= 1, "n must be at least 1")?;
    }
    if let Some(ns) = &p.n_list {
        check(!ns.is_empty() && ns.iter().all(|&n| n >= 1), "n_list must be nonempty with every n ≥ 1")?;
    }
    for (v, key) in [
        (p.h, "h"),
        (p.radius, "radius"),
        (p.tolerance, "tolerance"),
        (p.quotient_tolerance, "quotient_tolerance"),
        (p.slope_tolerance, "slope_tolerance"),
        (p.threshold, "threshold"),
        (p.variation_limit, "variation_limit"),
        (p.exponent, "exponent"),
    ] {
        positive(v, key)?;
    }
    if let Some(b) = p.b {
        check(b >= 0.0 && b.is_finite(), "b must be finite and ≥ 0")?;
    }
    if let Some(x) = p.x {
        check(x.is_finite() && x != 0.0, "x must be finite and nonzero")?;
    }
    for (v, key) in [(p.radial_points, "radial_points"), (p.angular_points, "angular_points"), (p.cases, "cases")] {
        if v == Some(0) {
            return Err(config_err(format!("{key} must be positive")));
        }
    }
    if let Some(m) = p.m_terms {
        check(m >= 1, "m_terms must be positive")?;
    }
    if let (Some(m), Some(l)) = (p.m_terms, p.series_len) {
        check(l > m, "series_len must exceed m_terms")?;
    }
    if let Some(pk) = &p.packet {
        check(pk.k0.is_finite() && pk.sigma > 0.0 && pk.x0.is_finite(), "packet needs finite k0, x0 and sigma > 0")?;
        check(pk.x0.abs() >= 4.0 * pk.sigma, "packet needs |x0| ≥ 4 sigma")?;
    }
    if let Some(g) = &p.grid {
        check(g.l > 0.0 && g.dt > 0.0 && g.n_t > 0 && g.n_x >= 2 && g.n_x % 2 == 0, "grid needs l, dt > 0, n_t > 0 and even n_x ≥ 2")?;
    }
    if let Some(levels) = &p.levels {
        check(levels.len() >= 2 && levels.windows(2).all(|w| w[0] < w[1]), "levels must be at least two increasing integers")?;
        check(levels.iter().all(|&l| l <= 8), "levels above 8 are not supported")?;
    }
    if p.threads == Some(0) {
        return Err(config_err("threads must be positive"));
    }
    Ok(())
}

impl Parameters {
    /// The potential; only valid after the scenario's required keys were checked.
    pub fn potential_spec(&self) -> Result<Option<PotentialSpec>, CliError> {
        match (self.potential, self.strength) {
            (Some(kind), Some(s)) => Ok(Some(PotentialSpec::new(kind, s).map_err(|e| config_err(e.to_string()))?)),
            (None, None) => Ok(None),
            _ => Err(config_err("potential and strength must be given together")),
        }
    }

    pub fn require_potential(&self) -> Result<PotentialSpec, CliError> {
        self.potential_spec()?.ok_or_else(|| config_err("potential and strength are required"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(scenario: Scenario, json: &str) -> Result<ExperimentConfig, CliError> {
        let raw: serde_json::Value = serde_json::from_str(json).unwrap();
        let keys: BTreeSet<&str> = raw.as_object().unwrap().keys().map(String::as_str).collect();
        ExperimentConfig::from_parameters(scenario, raw.clone(), &keys, Overrides { threads: Some(1), ..Default::default() })
    }

    #[test]
    fn required_and_unknown_keys() {
        let ok = build(Scenario::Verify, r#"{"potential":"delta","strength":1,"t_list":[1],"k_list":[2]}"#).unwrap();
        assert_eq!(ok.parameters.potential, Some(PotentialKind::Delta));
        assert_eq!(ok.seed, 0);
        let missing = build(Scenario::Verify, r#"{"potential":"delta","strength":1,"t_list":[1]}"#);
        assert!(matches!(missing, Err(CliError::Config(m)) if m.contains("k_list")));
        let foreign = build(Scenario::Verify, r#"{"potential":"delta","strength":1,"t_list":[1],"k_list":[2],"n_list":[3]}"#);
        assert!(matches!(foreign, Err(CliError::Config(m)) if m.contains("n_list")));
    }

    #[test]
    fn ranges_are_validated() {
        let bad = [
            r#"{"potential":"delta","strength":0,"t_list":[1],"k_list":[2]}"#,
            r#"{"potential":"delta","strength":1,"t_list":[-1],"k_list":[2]}"#,
            r#"{"potential":"delta","strength":1,"t_list":[1],"k_list":[2],"h":0}"#,
            r#"{"potential":"wall","strength":1,"t_list":[1],"k_list":[2]}"#,
        ];
        for json in bad {
            assert!(matches!(build(Scenario::Verify, json), Err(CliError::Config(_))), "{json}");
        }
    }

    #[test]
    fn flags_override_config() {
        let raw: serde_json::Value = serde_json::from_str(r#"{"seed":3,"out":"a","threads":2}"#).unwrap();
        let keys: BTreeSet<&str> = raw.as_object().unwrap().keys().map(String::as_str).collect();
        let flags = Overrides { out: Some("b".into()), seed: Some(9), threads: Some(4) };
        let cfg = ExperimentConfig::from_parameters(Scenario::LambdaTable, raw.clone(), &keys, flags).unwrap();
        assert_eq!((cfg.seed, cfg.threads), (9, 4));
        assert_eq!(cfg.out_dir, PathBuf::from("b"));
    }

    #[test]
    fn range_samples_hit_both_ends() {
        let r = Range { min: -3.0, max: 3.0, points: 61 };
        let s = r.samples();
        assert_eq!(s.len(), 61);
        assert_eq!((s[0], s[30], s[60]), (-3.0, 0.0, 3.0));
    }
}
