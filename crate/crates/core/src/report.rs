//! Machine-readable run reports.
//!
//! Reports are versioned (`"schema": 1`) and deterministic: identical
//! inputs, seed and tool version produce byte-identical JSON for any worker
//! count. Wall-clock timings are deliberately kept out of the JSON document
//! (they go to stderr or the text rendering) so reports stay diffable.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// One named check with its exact numbers.
#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckItem {
    pub fn flag(name: impl Into<String>, holds: bool) -> Self {
        CheckItem {
            name: name.into(),
            holds,
            lhs: None,
            rhs: None,
            detail: None,
        }
    }

    pub fn compare(name: impl Into<String>, holds: bool, lhs: u64, rhs: u64) -> Self {
        CheckItem {
            name: name.into(),
            holds,
            lhs: Some(lhs),
            rhs: Some(rhs),
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// A full run report: command echo, per-check results, counters and
/// command-specific payload.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub tool_version: String,
    pub command: String,
    pub inputs: Value,
    pub checks: Vec<CheckItem>,
    pub counters: BTreeMap<String, u64>,
    pub data: Value,
}

impl RunReport {
    pub fn new(command: impl Into<String>, inputs: Value) -> Self {
        RunReport {
            schema: REPORT_SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            inputs,
            checks: Vec::new(),
            counters: BTreeMap::new(),
            data: Value::Null,
        }
    }

    pub fn push_check(&mut self, check: CheckItem) {
        self.checks.push(check);
    }

    pub fn set_counter(&mut self, name: impl Into<String>, value: u64) {
        self.counters.insert(name.into(), value);
    }

    pub fn set_data<T: Serialize>(&mut self, data: &T) {
        self.data = serde_json::to_value(data).expect("report payloads serialize");
    }

    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    /// First failing check, for the exit-status message.
    pub fn first_failure(&self) -> Option<&CheckItem> {
        self.checks.iter().find(|c| !c.holds)
    }

    /// Pretty JSON with a trailing newline. `serde_json` maps are ordered,
    /// so the output is byte-stable.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// Human-oriented rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "inputs: {}", self.inputs);
        for c in &self.checks {
            let verdict = if c.holds { "ok" } else { "FAIL" };
            let _ = write!(out, "check {:<32} {}", c.name, verdict);
            if let (Some(l), Some(r)) = (c.lhs, c.rhs) {
                let _ = write!(out, "  (lhs {l}, rhs {r})");
            }
            if let Some(d) = &c.detail {
                let _ = write!(out, "  {d}");
            }
            out.push('\n');
        }
        for (k, v) in &self.counters {
            let _ = writeln!(out, "counter {k} = {v}");
        }
        if !self.data.is_null() {
            let _ = writeln!(
                out,
                "data: {}",
                serde_json::to_string_pretty(&self.data).expect("payload serializes")
            );
        }
        out
    }
}
