use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};

use crate::args::{Format, OutputArgs};

/// Shortest decimal that reads back to the same `f64`; scientific notation
/// outside `[1e-5, 1e16)`.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// A finished report: artifact body, one-line summary and exit code.
pub struct Report {
    pub body: String,
    pub summary: String,
    pub exit: i32,
}

pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut csv = Csv { text: String::new() };
        csv.row(header.iter().map(|h| h.to_string()));
        csv
    }

    pub fn row(&mut self, fields: impl IntoIterator<Item = String>) {
        let fields: Vec<String> = fields.into_iter().collect();
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// Common metadata; the timestamp is omitted on request.
pub fn metadata(output: &OutputArgs, extra: Value) -> Value {
    let mut map = Map::new();
    map.insert("version".into(), json!(gaugelab::VERSION));
    if !output.no_timestamp {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        map.insert("timestamp".into(), json!(secs));
    }
    if let Value::Object(extra) = extra {
        map.extend(extra);
    }
    Value::Object(map)
}

pub fn json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    text
}

pub fn emit(report: &Report, output: &OutputArgs) -> Result<(), String> {
    match &output.out {
        Some(path) => write_file(path, &report.body),
        None => {
            print!("{}", report.body);
            Ok(())
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

pub fn is_json(output: &OutputArgs) -> bool {
    output.format == Format::Json
}
