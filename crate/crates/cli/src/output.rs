//! Report envelope, output formats and the report schema.

use std::path::Path;

use clap::ValueEnum;
use fapres_core::report::SCHEMA_VERSION;
use serde_json::{json, Map, Value};

use crate::Command;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// What a command produced, before it is wrapped and written.
pub struct Outcome {
    pub fields: Map<String, Value>,
    /// `None` for plain computations, otherwise whether every audit passed.
    pub passed: Option<bool>,
    pub counterexample: Option<Value>,
    pub csv: Option<String>,
    pub text: Option<String>,
}

impl Outcome {
    pub fn new(fields: Value) -> Outcome {
        let Value::Object(fields) = fields else { panic!("report fields must be an object") };
        Outcome { fields, passed: None, counterexample: None, csv: None, text: None }
    }

    pub fn audited(mut self, passed: bool, counterexample: Option<Value>) -> Outcome {
        self.passed = Some(passed);
        self.counterexample = if passed { None } else { Some(counterexample.unwrap_or(Value::Null)) };
        self
    }

    pub fn with_csv(mut self, csv: String) -> Outcome {
        self.csv = Some(csv);
        self
    }

    pub fn with_text(mut self, text: String) -> Outcome {
        self.text = Some(text);
        self
    }

    /// The full report: schema version, command, config echo, status, then the fields.
    pub fn envelope(&self, command: &Command) -> Value {
        let (name, config) = match serde_json::to_value(command).expect("config serializes") {
            Value::Object(m) => m.into_iter().next().expect("one command"),
            other => (String::new(), other),
        };
        let mut out = Map::new();
        out.insert("schema_version".into(), json!(SCHEMA_VERSION));
        out.insert("command".into(), json!(name));
        out.insert("config".into(), config);
        let status = match self.passed {
            None => "ok",
            Some(true) => "pass",
            Some(false) => "fail",
        };
        out.insert("status".into(), json!(status));
        if let Some(c) = &self.counterexample {
            out.insert("counterexample".into(), c.clone());
        }
        for (k, v) in &self.fields {
            out.insert(k.clone(), v.clone());
        }
        Value::Object(out)
    }

    /// Writes the report; returns whether the run counts as a success.
    pub fn emit(&self, command: &Command, format: Format, report: Option<&Path>) -> Result<bool, String> {
        let body = match format {
            Format::Json => serde_json::to_string(&self.envelope(command)).expect("report serializes"),
            Format::Text => match &self.text {
                Some(t) => t.clone(),
                None => serde_json::to_string_pretty(&self.envelope(command)).expect("report serializes"),
            },
            Format::Csv => self
                .csv
                .as_ref()
                .map(|c| c.trim_end().to_string())
                .ok_or("csv output is only available for tabular reports (count, growth, lattice-check)")?,
        };
        match report {
            Some(path) => std::fs::write(path, format!("{body}\n")).map_err(|e| format!("{}: {e}", path.display()))?,
            None => print_stdout(&body),
        }
        Ok(self.passed != Some(false))
    }
}

/// Writes one line to standard output; a closed pipe (`fapres ... | head`) is not an error.
pub fn print_stdout(body: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{body}").and_then(|_| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing the report: {e}");
        }
    }
}

/// A JSON Schema for the report envelope and the command-specific fields.
pub fn schema() -> Value {
    let text = || json!({"type": "string"});
    let audit = json!({
        "type": "object",
        "required": ["name", "status", "detail"],
        "properties": {"name": text(), "status": {"enum": ["pass", "fail", "skipped"]}, "detail": {}},
    });
    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "fapres report",
        "type": "object",
        "required": ["schema_version", "command", "config", "status"],
        "properties": {
            "schema_version": {"const": SCHEMA_VERSION},
            "command": {"enum": ["build", "count", "eval", "growth", "trace", "theta", "norm", "lattice-check", "john"]},
            "config": {"type": "object", "description": "the command's arguments, echoed"},
            "status": {"enum": ["ok", "pass", "fail"]},
            "counterexample": {"description": "present exactly when status is fail"},
        },
        "commands": {
            "build": {"spec": text(), "out": text(), "domain_states": {"type": "integer"}, "add_states": {"type": "integer"},
                      "r": {"type": "integer"}, "verification": {"type": ["object", "null"]}},
            "count": {"spec": text(), "table": {"type": "array", "items": {"n": {}, "count": text(), "cumulative": text(), "ratio": text()}}},
            "eval": {"value": {"type": ["boolean", "null"]}, "vars": {"type": "array"}, "states": {"type": "integer"}},
            "growth": {"params": {"r": {}, "l0": {}, "C1": text(), "n_max": {}, "ratios": {}}, "audits": {"type": "array", "items": audit}},
            "trace": {"params": {}, "trace": {"steps": {"type": "array", "items": {
                "prime": {}, "start": {}, "outcome": text(), "jump": {"n": {}, "norm_before": {}, "norm_after": {}, "witness": {}},
                "h": {}, "within_h": {}, "theta": {}}}}},
            "theta": {"theta": {"description": "a rational, or \"inf\""}, "witness": {"v0": text(), "v": {"type": "array"}, "N": {"type": "array"}},
                      "certified": {"type": "boolean"}},
            "norm": {"norm": text(), "valuation": {"type": ["integer", "null"]}},
            "lattice-check": {"trials": {}, "hypothesis_held": {}, "passed": {}, "instances": {"type": "array"}},
            "john": {"rank": {}, "w": {}, "N": {}, "factor": {}, "certified": {}, "points": {}},
        },
    })
}
