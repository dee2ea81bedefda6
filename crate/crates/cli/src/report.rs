//! Verdict reports: JSON (sorted keys, exact values as strings) or text.

use serde::Serialize;
use serde_json::{Map, Value};

use gradua::{rational, Matrix, Rational};

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub details: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            pass: true,
            witness: None,
            details: Map::new(),
            timing_ms: None,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    /// Marks failure; a failing report always carries a witness.
    pub fn fail(&mut self, witness: impl Into<Value>) -> &mut Self {
        self.pass = false;
        self.witness = Some(witness.into());
        self
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("reports serialize"),
            Format::Text => {
                let mut out = format!("command: {}\nresult: {}\n", self.command, if self.pass { "pass" } else { "fail" });
                if let Some(w) = &self.witness {
                    out.push_str(&format!("witness: {}\n", text_value(w)));
                }
                for (k, v) in &self.details {
                    out.push_str(&format!("{k}: {}\n", text_value(v)));
                }
                if let Some(t) = self.timing_ms {
                    out.push_str(&format!("timing_ms: {t}\n"));
                }
                out
            }
        }
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn q(x: &Rational) -> Value {
    Value::String(rational::to_string(x))
}

pub fn qs(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(q).collect())
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| qs(r)).collect())
}

pub fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(xs.into_iter().map(|x| Value::String(x.to_string())).collect())
}
