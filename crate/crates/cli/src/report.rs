use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::error::CliError;

pub const SCHEMA: u32 = 1;

/// A finished run: the machine-readable body, a text rendering, an optional
/// CSV grid, and whether the mathematical check held.
pub struct Report {
    pub body: Value,
    pub text: String,
    pub csv: Option<String>,
    pub passed: bool,
}

impl Report {
    pub fn new<T: Serialize>(body: &T, text: String) -> Self {
        Report {
            body: serde_json::to_value(body).expect("reports serialize"),
            text,
            csv: None,
            passed: true,
        }
    }

    pub fn passed(mut self, passed: bool) -> Self {
        self.passed = passed;
        self
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn render(&self, command: &str, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut map = Map::new();
                map.insert("schema".into(), json!(SCHEMA));
                map.insert("command".into(), json!(command));
                match &self.body {
                    Value::Object(fields) => map.extend(fields.clone()),
                    other => {
                        map.insert("result".into(), other.clone());
                    }
                }
                let mut out = serde_json::to_string_pretty(&Value::Object(map)).expect("valid JSON");
                out.push('\n');
                Ok(out)
            }
            Format::Text => {
                let mut out = self.text.clone();
                if !out.ends_with('\n') {
                    out.push('\n');
                }
                Ok(out)
            }
            Format::Csv => self
                .csv
                .clone()
                .ok_or_else(|| CliError::usage(format!("'{command}' has no grid output; csv is unavailable"))),
        }
    }
}

/// CSV with a header row.
pub fn csv<const N: usize>(header: [&str; N], rows: impl IntoIterator<Item = [String; N]>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
}

/// Plain decimal for moderate magnitudes, scientific notation otherwise.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

pub fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}
