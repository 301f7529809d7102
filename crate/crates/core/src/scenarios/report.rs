//! Machine-readable scenario reports.

use std::time::Duration;

use serde::Serialize;

use crate::forms::{Status, Verdict};

#[derive(Clone, Debug, Serialize)]
pub struct Step {
    pub op: String,
    pub inputs: Vec<String>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct Assumption {
    pub statement: String,
    pub citation: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub scenario: String,
    pub tower: String,
    pub assumptions: Vec<Assumption>,
    pub steps: Vec<Step>,
    pub claims: Vec<String>,
    #[serde(rename = "final")]
    pub final_status: String,
    /// Wall time; kept out of the JSON so reports stay byte-identical.
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

impl Report {
    pub fn new(scenario: &str, tower: &str) -> Self {
        Report {
            scenario: scenario.into(),
            tower: tower.into(),
            assumptions: vec![],
            steps: vec![],
            claims: vec![],
            final_status: String::new(),
            elapsed: None,
        }
    }

    pub fn push(&mut self, op: &str, inputs: Vec<String>, verdict: Verdict) -> &Verdict {
        self.steps.push(Step {
            op: op.into(),
            inputs,
            verdict,
        });
        &self.steps.last().unwrap().verdict
    }

    pub fn step(&self, op: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.op == op)
    }

    /// Obligations left open anywhere in the pipeline.
    pub fn has_open_obligations(&self) -> bool {
        self.steps
            .iter()
            .any(|s| s.verdict.status == Status::Reduced)
    }

    /// 0 when every step was decided, 2 when obligations remain.
    pub fn exit_code(&self) -> i32 {
        if self.has_open_obligations() {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        let mut out = format!("scenario {} over {}\n", self.scenario, self.tower);
        for a in &self.assumptions {
            out.push_str(&format!("assume {} {}\n", a.citation, a.statement));
        }
        for s in &self.steps {
            out.push_str(&format!("[{:?}] {}", s.verdict.status, s.op));
            if !s.inputs.is_empty() {
                out.push_str(&format!(" ({})", s.inputs.join("; ")));
            }
            out.push('\n');
            for o in &s.verdict.obligations {
                match &o.citation {
                    Some(c) => out.push_str(&format!("    - {} {c}\n", o.statement)),
                    None => out.push_str(&format!("    - {}\n", o.statement)),
                }
            }
        }
        for c in &self.claims {
            out.push_str(&format!("claim: {c}\n"));
        }
        out.push_str(&format!("final: {}\n", self.final_status));
        out
    }
}
