//! The machine-readable report written by `--report`. Its JSON Schema is
//! `docs/report.schema.json`; bump [`SCHEMA_ID`] on incompatible changes.

use serde::Serialize;

pub const SCHEMA_ID: &str = "qu0-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Location {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proof: Option<String>,
    /// 1-based step number within its section.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub section: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub location: Location,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrustedReport {
    pub section: &'static str,
    pub step: usize,
    pub rule: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProofReport {
    pub label: String,
    pub line: usize,
    pub accepted: bool,
    pub trusted: Vec<TrustedReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub wff: String,
    #[serde(rename = "type")]
    pub ty: String,
    pub defined: bool,
    /// The rendered element; absent when undefined.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Binding {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterModelReport {
    pub base: Vec<String>,
    pub constants: Vec<Binding>,
    pub assignment: Vec<Binding>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidityReport {
    pub wff: String,
    pub max_base: usize,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counter_model: Option<CounterModelReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TacticReport {
    pub tactic: String,
    pub wff: String,
    pub steps: usize,
    pub accepted: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub status: Status,
    pub exit_code: i32,
    pub diagnostics: Vec<Diagnostic>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proofs: Option<Vec<ProofReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eval: Option<EvalReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validity: Option<ValidityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criteria: Option<Vec<CriterionReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tactic: Option<TacticReport>,
}

impl Report {
    pub fn new(command: &'static str) -> Report {
        Report {
            schema: SCHEMA_ID,
            command,
            status: Status::Pass,
            exit_code: 0,
            diagnostics: Vec::new(),
            proofs: None,
            eval: None,
            validity: None,
            criteria: None,
            tactic: None,
        }
    }

    /// Adds a diagnostic that makes the run fail.
    pub fn fail(&mut self, location: Location, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic {
            location,
            message: message.into(),
        });
        if self.status == Status::Pass {
            self.set_status(Status::Fail);
        }
    }

    pub fn error(command: &'static str, location: Location, message: impl Into<String>) -> Report {
        let mut r = Report::new(command);
        r.diagnostics.push(Diagnostic {
            location,
            message: message.into(),
        });
        r.set_status(Status::Error);
        r
    }

    fn set_status(&mut self, s: Status) {
        self.status = s;
        self.exit_code = s.exit_code();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_adds_diagnostic_and_exit_code() {
        let mut r = Report::new("check");
        assert_eq!(r.exit_code, 0);
        r.fail(Location::default(), "nope");
        assert_eq!(
            (r.status, r.exit_code, r.diagnostics.len()),
            (Status::Fail, 1, 1)
        );
        let e = Report::error("eval", Location::default(), "bad");
        assert_eq!(e.exit_code, 2);
    }

    #[test]
    fn optional_fields_are_omitted() {
        let v: serde_json::Value = serde_json::from_str(&Report::new("eval").to_json()).unwrap();
        assert_eq!(v["schema"], SCHEMA_ID);
        assert!(v.get("proofs").is_none());
        assert_eq!(v["status"], "pass");
    }
}
