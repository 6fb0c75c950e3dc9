//! Run reports: a stable JSON schema and a text rendering derived from it.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

/// Artifact version stamped into every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Whether a check's number is a residual (smaller is better) or a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Residual,
    Value,
}

/// JSON has no infinities, so non-finite numbers travel as strings.
mod lossless_f64 {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(&x.to_string())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    /// Stable snake_case identifier.
    pub name: String,
    pub passed: bool,
    pub metric: Metric,
    #[serde(with = "lossless_f64")]
    pub value: f64,
    pub details: Value,
}

impl Check {
    pub fn residual(name: impl Into<String>, residual: f64, passed: bool, details: impl Serialize) -> Self {
        Self::make(name, Metric::Residual, residual, passed, details)
    }

    pub fn value(name: impl Into<String>, value: f64, passed: bool, details: impl Serialize) -> Self {
        Self::make(name, Metric::Value, value, passed, details)
    }

    /// A check that could not be evaluated.
    pub fn errored(name: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Self::make(name, Metric::Residual, f64::INFINITY, false, serde_json::json!({ "error": err.to_string() }))
    }

    fn make(name: impl Into<String>, metric: Metric, value: f64, passed: bool, details: impl Serialize) -> Self {
        let details = serde_json::to_value(details).unwrap_or_else(|e| Value::String(e.to_string()));
        Self { name: name.into(), passed, metric, value, details }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub seed: u64,
    pub version: String,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, seed: u64) -> Self {
        Self {
            command: command.into(),
            params: BTreeMap::new(),
            seed,
            version: VERSION.to_string(),
            checks: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.params.insert(key.to_string(), v);
        self
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Puts checks in canonical order, independent of scheduling.
    pub fn finish(mut self) -> Self {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Pretty JSON, newline-terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Human-readable rendering of the JSON form.
    pub fn to_text(&self) -> String {
        render_text(&serde_json::from_str(&self.to_json()).expect("own JSON parses"))
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Renders a report given as JSON. Only fields present in the JSON are shown.
pub fn render_text(report: &Value) -> String {
    let mut out = String::new();
    let field = |k: &str| report.get(k).map(scalar).unwrap_or_default();
    out.push_str(&format!("{} (version {}, seed {})\n", field("command"), field("version"), field("seed")));
    if let Some(Value::Object(params)) = report.get("params") {
        for (k, v) in params {
            out.push_str(&format!("  {k} = {}\n", scalar(v)));
        }
    }
    let checks = report.get("checks").and_then(Value::as_array).cloned().unwrap_or_default();
    let width = checks.iter().filter_map(|c| c.get("name")?.as_str()).map(str::len).max().unwrap_or(0);
    let mut failed = 0;
    for c in &checks {
        let passed = c.get("passed").and_then(Value::as_bool).unwrap_or(false);
        failed += usize::from(!passed);
        let name = c.get("name").map(scalar).unwrap_or_default();
        let metric = c.get("metric").map(scalar).unwrap_or_default();
        let value = c.get("value").map(scalar).unwrap_or_default();
        out.push_str(&format!("{} {name:width$}  {metric}={value}\n", if passed { "PASS" } else { "FAIL" }));
    }
    out.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
    out
}
