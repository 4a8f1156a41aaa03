//! Serialized run reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nctriples_core::report::{Check, Status};
use serde::{Deserialize, Serialize};

/// A finite value, or `"inf"`, `"-inf"` or `"nan"`, so reports stay valid JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Real {
    Finite(f64),
    Special(String),
}

impl From<f64> for Real {
    fn from(v: f64) -> Self {
        if v.is_finite() {
            Real::Finite(if v == 0.0 { 0.0 } else { v })
        } else if v.is_nan() {
            Real::Special("nan".into())
        } else if v > 0.0 {
            Real::Special("inf".into())
        } else {
            Real::Special("-inf".into())
        }
    }
}

impl std::fmt::Display for Real {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Real::Finite(v) if *v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e15) => write!(f, "{v:e}"),
            Real::Finite(v) => write!(f, "{v}"),
            Real::Special(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessRecord {
    /// Element labels, parseable by the group's element syntax.
    pub elements: Vec<String>,
    pub values: Vec<Real>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRecord {
    pub name: String,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, Real>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub safe_core_radius: Option<u32>,
}

impl CheckRecord {
    pub fn from_check(prefix: &str, c: &Check) -> Self {
        let name = if prefix.is_empty() || c.name == prefix {
            c.name.clone()
        } else {
            format!("{prefix}/{}", c.name)
        };
        CheckRecord {
            name,
            status: c.status.as_str().to_string(),
            witness: c.witness.as_ref().map(|w| WitnessRecord {
                elements: w.labels.clone(),
                values: w.values.iter().map(|&v| v.into()).collect(),
            }),
            values: c.values.iter().map(|(k, v)| (k.clone(), (*v).into())).collect(),
            detail: c.detail.clone(),
            safe_core_radius: c.safe_core_radius,
        }
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail.as_str()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, String>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub format: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub version: String,
    pub config: RunConfig,
    /// Sorted by name.
    pub checks: Vec<CheckRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<serde_json::Value>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(config: RunConfig, mut checks: Vec<CheckRecord>, summary: Option<serde_json::Value>, elapsed_ms: u64) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            checks,
            summary,
            elapsed_ms,
        }
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(CheckRecord::is_fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "nctriples {} {}", self.version, self.config.command);
        for c in &self.checks {
            let _ = write!(out, "{:<7} {}", c.status.to_uppercase(), c.name);
            if let Some(r) = c.safe_core_radius {
                let _ = write!(out, " (safe core r={r})");
            }
            out.push('\n');
            for (k, v) in &c.values {
                let _ = writeln!(out, "        {k} = {v}");
            }
            if let Some(w) = &c.witness {
                let values: Vec<String> = w.values.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "        witness ({}) values [{}]", w.elements.join(", "), values.join(", "));
            }
            if !c.detail.is_empty() {
                let _ = writeln!(out, "        {}", c.detail);
            }
        }
        if let Some(s) = &self.summary {
            let _ = writeln!(out, "summary: {}", serde_json::to_string(s).expect("summary serializes"));
        }
        let verdict = if self.failed() { "FAIL" } else { "PASS" };
        let _ = writeln!(out, "{verdict} ({} checks, {} ms)", self.checks.len(), self.elapsed_ms);
        out
    }
}

/// Decimal string of a real value; integers print without a fractional part.
pub fn decimal(v: f64) -> String {
    format!("{v}")
}
