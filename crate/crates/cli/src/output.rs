//! Report assembly with a determinism contract: identical resolved config
//! means byte-identical output, whatever the thread count.
//!
//! JSON reports carry exact integers/rationals as strings ("num/den") and
//! floats as plain numbers governed by the stated absolute tolerance.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "plain" => Ok(Format::Plain),
            other => anyhow::bail!("unknown format '{other}' (json|csv|plain)"),
        }
    }
}

/// Absolute tolerance contract for every float in a report.
pub const FLOAT_ABS_TOL: f64 = 1e-9;

pub fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn rational_str(r: &num_rational::BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Assembles the standard report envelope: resolved config, tolerance
/// schema, then the result document.
pub fn envelope(command: &str, config: Value, result: Value) -> Value {
    let mut doc = Map::new();
    doc.insert("command".into(), Value::String(command.into()));
    doc.insert("config".into(), config);
    doc.insert(
        "tolerances".into(),
        json!({ "float_abs": FLOAT_ABS_TOL }),
    );
    doc.insert("result".into(), result);
    Value::Object(doc)
}

pub fn render_json(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable");
    s.push('\n');
    s
}

/// CSV output: `# key=value` header comments (the resolved config), then the
/// frozen-column table.
pub fn render_csv(config_pairs: &[(String, String)], table: &str) -> String {
    let mut out = String::new();
    for (k, v) in config_pairs {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str(table);
    out
}
