//! Pass/fail reports shared by the axiom, lemma and RGD checkers.

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Not run; `detail` says why.
    Skipped,
    OutOfScope,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Self {
            name: name.into(),
            status,
            method: None,
            detail: None,
            witness: None,
        }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        Self::new(name, Status::Pass)
    }

    pub fn fail(name: impl Into<String>, witness: Value) -> Self {
        Self::new(name, Status::Fail).with_witness(witness)
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, witness: Option<Value>) -> Self {
        let mut c = Self::new(name, if ok { Status::Pass } else { Status::Fail });
        c.witness = witness;
        c
    }

    pub fn with_method(mut self, method: impl Into<String>) -> Self {
        self.method = Some(method.into());
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Ordered list of checks. Timings are kept apart from the checks so that the
/// check payload is reproducible byte for byte.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub timings_ms: Vec<(String, f64)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Runs `f`, records its wall time under `label`, and pushes its checks.
    pub fn timed<F>(&mut self, label: &str, f: F)
    where
        F: FnOnce() -> Vec<Check>,
    {
        let start = Instant::now();
        let checks = f();
        self.timings_ms
            .push((label.to_string(), start.elapsed().as_secs_f64() * 1e3));
        self.checks.extend(checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn status(&self, name: &str) -> Option<Status> {
        self.get(name).map(|c| c.status)
    }

    /// `{"all_pass": .., "checks": [..]}`; timings excluded.
    pub fn payload(&self) -> Value {
        serde_json::json!({
            "all_pass": self.all_pass(),
            "checks": self.checks,
        })
    }

    pub fn timings(&self) -> Value {
        Value::Object(
            self.timings_ms
                .iter()
                .map(|(k, v)| (k.clone(), serde_json::json!(v)))
                .collect(),
        )
    }
}
