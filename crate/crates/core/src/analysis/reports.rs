//! Structured verdict reports. Serialization is byte-deterministic: maps
//! are ordered, vectors keep assembly order, and every number is a rational
//! string.

use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Holds,
    Fails,
    NotApplicable,
}

/// A named boolean fact about the analyzed object; failures carry a
/// concrete witness.
#[derive(Clone, Debug, Serialize)]
pub struct Flag {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

/// A criterion-level conclusion.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub criterion: String,
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Verdict {
    pub fn holds(criterion: &str) -> Self {
        Verdict {
            criterion: criterion.into(),
            status: VerdictStatus::Holds,
            witness: None,
            reason: None,
        }
    }

    pub fn fails(criterion: &str, witness: Value) -> Self {
        Verdict {
            criterion: criterion.into(),
            status: VerdictStatus::Fails,
            witness: Some(witness),
            reason: None,
        }
    }

    pub fn not_applicable(criterion: &str, reason: &str) -> Self {
        Verdict {
            criterion: criterion.into(),
            status: VerdictStatus::NotApplicable,
            witness: None,
            reason: Some(reason.into()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input: Value,
    pub invariants: BTreeMap<String, Value>,
    pub flags: Vec<Flag>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(command: &str, input: Value) -> Self {
        Report {
            command: command.into(),
            input,
            invariants: BTreeMap::new(),
            flags: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn invariant(&mut self, name: &str, value: Value) {
        self.invariants.insert(name.into(), value);
    }

    pub fn flag(&mut self, name: &str, holds: bool, witness: Option<Value>) {
        self.flags.push(Flag {
            name: name.into(),
            holds,
            witness,
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// A plain-text table appended after the JSON under `--pretty`.
pub fn render_pretty(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!("\n== {} ==\n", report.command));
    if !report.invariants.is_empty() {
        out.push_str("invariants:\n");
        for (k, v) in &report.invariants {
            out.push_str(&format!("  {k:<32} {v}\n"));
        }
    }
    if !report.flags.is_empty() {
        out.push_str("flags:\n");
        for f in &report.flags {
            let mark = if f.holds { "yes" } else { "NO" };
            out.push_str(&format!("  {:<32} {mark}\n", f.name));
            if let Some(w) = &f.witness {
                out.push_str(&format!("      witness: {w}\n"));
            }
        }
    }
    if !report.verdicts.is_empty() {
        out.push_str("verdicts:\n");
        for v in &report.verdicts {
            let status = match v.status {
                VerdictStatus::Holds => "holds",
                VerdictStatus::Fails => "FAILS",
                VerdictStatus::NotApplicable => "not applicable",
            };
            out.push_str(&format!("  {:<32} {status}\n", v.criterion));
            if let Some(w) = &v.witness {
                out.push_str(&format!("      witness: {w}\n"));
            }
            if let Some(r) = &v.reason {
                out.push_str(&format!("      reason: {r}\n"));
            }
        }
    }
    out
}
