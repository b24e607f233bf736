use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{CommandKind, RunConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

impl Status {
    pub fn from_pass(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn warn_unless(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Warn
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Warn => "WARN",
            Status::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub command: CommandKind,
    pub scope: String,
    pub name: String,
    pub status: Status,
    pub metrics: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Finding {
    pub fn new(cfg: &RunConfig, name: impl Into<String>, status: Status) -> Self {
        Self {
            command: cfg.command,
            scope: cfg.scope(),
            name: name.into(),
            status,
            metrics: BTreeMap::new(),
            note: None,
        }
    }

    pub fn metric(mut self, key: &str, value: impl Serialize) -> Self {
        let value = serde_json::to_value(value).unwrap_or(Value::Null);
        self.metrics.insert(key.to_string(), value);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: RunConfig,
    pub status: Status,
    pub findings: Vec<Finding>,
    /// Set when the run stopped early; the findings are then partial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Not part of the determinism contract.
    pub timing: Timing,
}

impl VerificationReport {
    pub fn new(config: RunConfig, findings: Vec<Finding>, error: Option<String>, elapsed_ms: f64) -> Self {
        let status = findings
            .iter()
            .map(|f| f.status)
            .max()
            .unwrap_or(Status::Pass)
            .max(if error.is_some() { Status::Fail } else { Status::Pass });
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            status,
            findings,
            error,
            timing: Timing { elapsed_ms },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are serializable")
    }

    /// The JSON without the timing field; identical configs give identical text.
    pub fn deterministic_json(&self) -> String {
        strip_timing(&self.to_json())
    }

    pub fn to_table(&self) -> String {
        render_table(&serde_json::to_value(self).expect("report values are serializable"))
    }
}

pub fn strip_timing(json: &str) -> String {
    match serde_json::from_str::<Value>(json) {
        Ok(Value::Object(mut map)) => {
            map.remove("timing");
            serde_json::to_string_pretty(&Value::Object(map)).expect("re-serializing parsed JSON")
        }
        _ => json.to_string(),
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:.3e}"),
            _ => n.to_string(),
        },
        Value::Array(items) => format!("[{}]", items.iter().map(compact).collect::<Vec<_>>().join(", ")),
        Value::Object(map) => format!(
            "{{{}}}",
            map.iter()
                .map(|(k, v)| format!("{k}: {}", compact(v)))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Human-readable rendering of a report's JSON value.
pub fn render_table(report: &Value) -> String {
    let mut out = String::new();
    let get = |k: &str| report.get(k).map(compact).unwrap_or_default();
    let _ = writeln!(
        out,
        "ghlab {}  schema {}  status {}",
        get("tool_version"),
        get("schema_version"),
        get("status")
    );
    if let Some(err) = report.get("error").and_then(Value::as_str) {
        let _ = writeln!(out, "stopped early: {err}");
    }
    let findings = report
        .get("findings")
        .and_then(Value::as_array)
        .cloned()
        .unwrap_or_default();
    for f in &findings {
        let field = |k: &str| f.get(k).map(compact).unwrap_or_default();
        let _ = writeln!(
            out,
            "{:<5} {:<17} {:<24} {}",
            field("status"),
            field("command"),
            field("scope"),
            field("name")
        );
        if let Some(metrics) = f.get("metrics").and_then(Value::as_object) {
            for (k, v) in metrics {
                let _ = writeln!(out, "        {k} = {}", compact(v));
            }
        }
        if let Some(note) = f.get("note").and_then(Value::as_str) {
            let _ = writeln!(out, "        note: {note}");
        }
    }
    if let Some(ms) = report.pointer("/timing/elapsed_ms").and_then(Value::as_f64) {
        let _ = writeln!(out, "elapsed {ms:.1} ms");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_status_is_worst_finding() {
        let cfg = RunConfig::default();
        let findings = vec![
            Finding::new(&cfg, "a", Status::Pass),
            Finding::new(&cfg, "b", Status::Warn),
        ];
        let r = VerificationReport::new(cfg.clone(), findings, None, 1.0);
        assert_eq!(r.status, Status::Warn);
        let r = VerificationReport::new(cfg, vec![], Some("stopped".into()), 1.0);
        assert_eq!(r.status, Status::Fail);
    }

    #[test]
    fn timing_is_stripped() {
        let cfg = RunConfig::default();
        let a = VerificationReport::new(cfg.clone(), vec![], None, 1.0);
        let b = VerificationReport::new(cfg, vec![], None, 2.0);
        assert_ne!(a.to_json(), b.to_json());
        assert_eq!(a.deterministic_json(), b.deterministic_json());
        assert!(!a.deterministic_json().contains("elapsed_ms"));
    }

    #[test]
    fn table_lists_findings() {
        let cfg = RunConfig::default();
        let f = Finding::new(&cfg, "eigen", Status::Pass)
            .metric("lambda", 2.5)
            .note("ok");
        let table = VerificationReport::new(cfg, vec![f], None, 3.0).to_table();
        assert!(table.contains("PASS"));
        assert!(table.contains("lambda = 2.500e0"));
        assert!(table.contains("note: ok"));
    }
}
