use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Agrees,
    Disagrees,
    Skipped,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Outcome {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
    pub detail: String,
}

/// The JSON document every command writes. `elapsed_ms` is the only field
/// that varies between runs with identical inputs.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub version: &'static str,
    pub inputs: Map<String, Value>,
    pub checks: Vec<Check>,
    pub data: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paper_claims: Option<Value>,
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn new(command: &'static str) -> RunReport {
        RunReport {
            command,
            version: env!("CARGO_PKG_VERSION"),
            inputs: Map::new(),
            checks: Vec::new(),
            data: Map::new(),
            paper_claims: None,
            elapsed_ms: 0,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) {
        self.inputs.insert(key.into(), serde_json::to_value(value).expect("input serializes"));
    }

    pub fn data(&mut self, key: &str, value: impl Serialize) {
        self.data.insert(key.into(), serde_json::to_value(value).expect("data serializes"));
    }

    pub fn check(&mut self, name: impl Into<String>, outcome: Outcome, detail: impl Into<String>) {
        let name = name.into();
        debug_assert!(self.checks.iter().all(|c| c.name != name), "duplicate check {name}");
        self.checks.push(Check { name, outcome, detail: detail.into() });
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.outcome == Outcome::Fail)
    }
}
