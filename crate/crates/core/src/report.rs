//! Run configuration and machine-readable verification reports.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeConfig;

pub const SCHEMA_VERSION: u32 = 1;

/// Lattice parameters plus run settings. The lattice keys sit at the top level
/// of the JSON object; everything else is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub lattice: LatticeConfig,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    /// Overrides of the default per-check tolerances.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
}

fn default_lambda() -> f64 {
    1.0
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lattice: LatticeConfig::default(),
            lambda: default_lambda(),
            tolerances: BTreeMap::new(),
            seed: 0,
            output_path: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.lattice.build()?;
        if !self.lambda.is_finite() {
            return Err(Error::InvalidArgument(format!("lambda must be finite, got {}", self.lambda)));
        }
        for (name, &tol) in &self.tolerances {
            if !(tol >= 0.0) || !tol.is_finite() {
                return Err(Error::InvalidArgument(format!("tolerance {name} must be finite and >= 0, got {tol}")));
            }
        }
        Ok(())
    }

    /// Tolerance for `name`: the configured override, else `default`.
    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}

/// A real or complex check value; complex values serialize as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Real(f64),
    Complex([f64; 2]),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl From<Complex64> for Value {
    fn from(z: Complex64) -> Self {
        Value::Complex([z.re, z.im])
    }
}

impl Value {
    pub fn as_complex(&self) -> Complex64 {
        match *self {
            Value::Real(x) => Complex64::new(x, 0.0),
            Value::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

/// How a check compares its two sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `abs_diff = |lhs - rhs|`.
    Equal,
    /// Lower bound `lhs >= rhs`; `abs_diff` is the shortfall `max(0, rhs - lhs)`.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub relation: Relation,
    pub lhs: Value,
    pub rhs: Value,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn equal(name: &str, lhs: impl Into<Value>, rhs: impl Into<Value>, tolerance: f64) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let abs_diff = (lhs.as_complex() - rhs.as_complex()).norm();
        Self::finish(name, Relation::Equal, lhs, rhs, abs_diff, tolerance)
    }

    pub fn at_least(name: &str, lhs: f64, bound: f64, tolerance: f64) -> Self {
        let shortfall = if lhs.is_nan() { f64::INFINITY } else { (bound - lhs).max(0.0) };
        Self::finish(name, Relation::AtLeast, lhs.into(), bound.into(), shortfall, tolerance)
    }

    fn finish(name: &str, relation: Relation, lhs: Value, rhs: Value, abs_diff: f64, tolerance: f64) -> Self {
        // NaN differences never pass
        let pass = abs_diff <= tolerance;
        CheckRecord { name: name.to_string(), relation, lhs, rhs, abs_diff, tolerance, pass }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Versions {
    pub multisymp_core: String,
}

impl Default for Versions {
    fn default() -> Self {
        Versions { multisymp_core: env!("CARGO_PKG_VERSION").to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub config: RunConfig,
    pub versions: Versions,
    pub all_pass: bool,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    /// Assembles a report with checks ordered by name.
    pub fn new(suite: &str, config: &RunConfig, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        Report {
            schema_version: SCHEMA_VERSION,
            suite: suite.to_string(),
            config: config.clone(),
            versions: Versions::default(),
            all_pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only serializable data")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_accepts_bare_lattice_object() {
        let cfg = RunConfig::from_json(r#"{"d":1,"L":6.283185307179586,"N":16,"n_max":3,"m":1}"#).unwrap();
        assert_eq!(cfg.lattice.points, 16);
        assert_eq!(cfg.lattice.hbar, 1.0);
        assert_eq!(cfg.lambda, 1.0);
        assert!(RunConfig::from_json(r#"{"d":1,"L":1,"N":8,"n_max":4,"m":1}"#).is_err());
        assert!(RunConfig::from_json(r#"{"d":1,"L":1,"N":8,"n_max":2,"m":1,"tolerances":{"x":-1}}"#).is_err());
    }

    #[test]
    fn records() {
        let r = CheckRecord::equal("a", 1.0, Complex64::new(1.0, 1e-3), 1e-2);
        assert!(r.pass && (r.abs_diff - 1e-3).abs() < 1e-15);
        assert!(!CheckRecord::equal("b", f64::NAN, 0.0, 1.0).pass);
        assert!(CheckRecord::at_least("c", 2.0, 1.0, 0.0).pass);
        assert!(!CheckRecord::at_least("c", 0.5, 1.0, 0.0).pass);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"rhs\":[1.0,0.001]"));
    }
}
