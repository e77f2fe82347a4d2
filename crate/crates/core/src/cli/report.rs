//! Machine-readable reports.

use crate::check::{Check, NumericCheck};
use crate::expr::{is_zero, Sampling, Scalar, ZeroStatus};
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    StructurallyZero,
    /// Not zero in canonical form, yet every sample vanished.
    ProbablyNonzero,
    NumericPass,
    Fail,
}

impl CheckStatus {
    pub fn ok(self) -> bool {
        matches!(self, CheckStatus::StructurallyZero | CheckStatus::NumericPass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessEntry {
    /// Zero-based frame indices of the residual.
    pub at: Vec<usize>,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub magnitude: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: CheckStatus,
    pub evaluated: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_abs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TensorEntry {
    /// One-based indices.
    pub index: Vec<usize>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Subject {
    pub name: String,
    pub source: String,
    pub rank: usize,
    pub coords: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subject: Option<Subject>,
    pub seed: u64,
    pub samples: usize,
    pub status: String,
    pub checks: Vec<CheckEntry>,
    pub tensors: BTreeMap<String, Vec<TensorEntry>>,
    pub values: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(command: &str, subject: Option<Subject>, sampling: &Sampling) -> Report {
        Report {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            subject,
            seed: sampling.seed,
            samples: sampling.samples,
            status: "pass".to_string(),
            checks: Vec::new(),
            tensors: BTreeMap::new(),
            values: BTreeMap::new(),
            timing_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status.ok())
    }

    fn refresh(&mut self) {
        self.status = if self.passed() { "pass" } else { "fail" }.to_string();
    }

    /// Adds a structural check; failures are classified by sampling.
    pub fn check(&mut self, check: &Check, sampling: &Sampling) {
        let (status, witness) = match check.first_failure() {
            None => (CheckStatus::StructurallyZero, None),
            Some(res) => {
                let mut entry = WitnessEntry {
                    at: res.at.clone(),
                    value: res.value.to_string(),
                    point: None,
                    magnitude: None,
                };
                let status = match is_zero(&res.value, sampling) {
                    Ok(ZeroStatus::ProbablyNonzero {
                        witness: Some(w), ..
                    }) => {
                        entry.magnitude = Some(w.value_re.hypot(w.value_im));
                        entry.point = Some(w.point);
                        CheckStatus::Fail
                    }
                    Ok(ZeroStatus::ProbablyNonzero {
                        all_samples_vanish: true,
                        ..
                    }) => CheckStatus::ProbablyNonzero,
                    _ => CheckStatus::Fail,
                };
                (status, Some(entry))
            }
        };
        self.checks.push(CheckEntry {
            name: check.name.clone(),
            status,
            evaluated: check.evaluated,
            failures: check.failures.len(),
            tolerance: None,
            max_abs: None,
            witness,
        });
        self.refresh();
    }

    /// Adds a check under a different name.
    pub fn check_as(&mut self, name: &str, check: &Check, sampling: &Sampling) {
        let mut c = check.clone();
        c.name = name.to_string();
        self.check(&c, sampling);
    }

    pub fn numeric(&mut self, check: &NumericCheck) {
        let status = if check.passed() {
            CheckStatus::NumericPass
        } else {
            CheckStatus::Fail
        };
        self.checks.push(CheckEntry {
            name: check.name.clone(),
            status,
            evaluated: check.points,
            failures: usize::from(!check.passed()),
            tolerance: Some(check.tol),
            max_abs: Some(check.max_abs),
            witness: None,
        });
        self.refresh();
    }

    /// A boolean claim recorded as a check.
    pub fn claim(&mut self, name: &str, holds: bool) {
        self.checks.push(CheckEntry {
            name: name.to_string(),
            status: if holds {
                CheckStatus::StructurallyZero
            } else {
                CheckStatus::Fail
            },
            evaluated: 1,
            failures: usize::from(!holds),
            tolerance: None,
            max_abs: None,
            witness: None,
        });
        self.refresh();
    }

    pub fn value(&mut self, key: &str, v: impl Serialize) {
        self.values
            .insert(key.to_string(), serde_json::to_value(v).expect("serializable"));
    }

    pub fn tensor(&mut self, key: &str, entries: Vec<TensorEntry>) {
        self.tensors.insert(key.to_string(), entries);
    }

    /// Renders for a terminal; `color` adds ANSI status colors.
    pub fn to_text(&self, color: bool) -> String {
        let paint = |ok: bool, s: &str| {
            if !color {
                s.to_string()
            } else if ok {
                format!("\x1b[32m{s}\x1b[0m")
            } else {
                format!("\x1b[31m{s}\x1b[0m")
            }
        };
        let mut out = String::new();
        let subject = self.subject.as_ref().map(|s| s.name.as_str()).unwrap_or("-");
        out.push_str(&format!("{} {}: {}\n", self.command, subject, paint(self.passed(), &self.status)));
        for c in &self.checks {
            let label = match c.status {
                CheckStatus::StructurallyZero => "zero",
                CheckStatus::NumericPass => "numeric pass",
                CheckStatus::ProbablyNonzero => "undecided",
                CheckStatus::Fail => "FAIL",
            };
            out.push_str(&format!("  {:<44} {}", c.name, paint(c.status.ok(), label)));
            if let Some(w) = &c.witness {
                out.push_str(&format!("  at {:?}: {}", w.at, w.value));
            }
            out.push('\n');
        }
        for (k, v) in &self.values {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        for (k, entries) in &self.tensors {
            out.push_str(&format!("  {k}:\n"));
            for e in entries {
                out.push_str(&format!("    {:?} = {}\n", e.index, e.value));
            }
        }
        if let Some(t) = self.timing_ms {
            out.push_str(&format!("  time {t:.1} ms\n"));
        }
        out
    }
}

/// Nonzero entries of an indexed family, one-based.
pub fn entries<'a>(items: impl IntoIterator<Item = (Vec<usize>, &'a Scalar)>) -> Vec<TensorEntry> {
    items
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(idx, v)| TensorEntry {
            index: idx.into_iter().map(|k| k + 1).collect(),
            value: v.to_string(),
        })
        .collect()
}
