//! `<scenario>.report.json`: gates, residual summary, timings.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::CliError;

/// One tolerance check, recomputed from the CSV artifact.
#[derive(Debug, Clone, Serialize)]
pub struct Gate {
    pub name: String,
    pub value: f64,
    pub requirement: String,
    pub passed: bool,
}

impl Gate {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, requirement: format!("<= {limit:e}"), passed: value <= limit }
    }

    pub fn below(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, requirement: format!("< {limit:e}"), passed: value < limit }
    }

    pub fn within(name: impl Into<String>, value: f64, center: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value,
            requirement: format!("{center} ± {tol}"),
            passed: (value - center).abs() <= tol,
        }
    }

    /// A yes/no property; `value` carries the quantity it was judged on.
    pub fn holds(name: impl Into<String>, value: f64, requirement: impl Into<String>, passed: bool) -> Self {
        Self { name: name.into(), value, requirement: requirement.into(), passed }
    }
}

#[derive(Debug, Serialize)]
pub struct Report<'a> {
    pub scenario: &'static str,
    pub passed: bool,
    pub verdict_source: String,
    pub config: &'a ExperimentConfig,
    pub gates: Vec<Gate>,
    pub residuals: serde_json::Value,
    pub timings: BTreeMap<String, f64>,
    pub artifacts: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report<'_> {
    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}
