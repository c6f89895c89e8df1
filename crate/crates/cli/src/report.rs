//! Report schema shared by every experiment.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "NOT-APPLICABLE")]
    NotApplicable,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::NotApplicable => "NOT-APPLICABLE",
        }
    }

    pub fn from_check(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }
}

/// Outcome of testing one named relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    /// Stable identifier of the relation under test.
    pub relation: String,
    pub status: Status,
    pub detail: String,
}

impl Verdict {
    pub fn new(relation: &str, status: Status, detail: impl Into<String>) -> Self {
        Self {
            relation: relation.to_string(),
            status,
            detail: detail.into(),
        }
    }

    pub fn check(relation: &str, ok: bool, detail: impl Into<String>) -> Self {
        Self::new(relation, Status::from_check(ok), detail)
    }
}

/// Canonical output of one experiment run. Contains no timing data, so
/// reruns with equal inputs serialize to identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub params: Value,
    pub seed: u64,
    pub results: Map<String, Value>,
    pub verdicts: Vec<Verdict>,
    pub version: String,
}

impl ExperimentReport {
    pub fn ok(&self) -> bool {
        self.verdicts.iter().all(|v| v.status != Status::Fail)
    }

    /// Worst status across verdicts: any failure, else any pass.
    pub fn overall(&self) -> Status {
        if !self.ok() {
            Status::Fail
        } else if self.verdicts.iter().any(|v| v.status == Status::Pass) {
            Status::Pass
        } else {
            Status::NotApplicable
        }
    }

    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Top-level scalar results, with nested objects flattened to dotted keys.
    pub fn scalar_results(&self) -> Vec<(String, Value)> {
        let mut out = Vec::new();
        flatten("", &self.results, &mut out);
        out
    }
}

fn flatten(prefix: &str, map: &Map<String, Value>, out: &mut Vec<(String, Value)>) {
    for (k, v) in map {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            Value::Object(inner) => flatten(&key, inner, out),
            Value::Array(_) => {}
            other => out.push((key, other.clone())),
        }
    }
}
