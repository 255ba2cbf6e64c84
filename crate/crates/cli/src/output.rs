//! JSON/CSV emission with fixed numeric precision.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::OutputArgs;

/// Significant digits kept for floating-point numbers in JSON output.
pub const JSON_DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Rounds every float in a JSON tree to [`JSON_DIGITS`] significant digits.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let rounded: f64 = format!("{:.*e}", JSON_DIGITS - 1, x)
                .parse()
                .expect("formatted float parses");
            if let Some(r) = serde_json::Number::from_f64(rounded) {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn to_json_string<T: Serialize>(doc: &T) -> Result<String> {
    let mut v = serde_json::to_value(doc)?;
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn to_csv_string<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Emits the full document as JSON, or the summary rows as CSV.
pub fn emit<D: Serialize, R: Serialize>(out: &OutputArgs, doc: &D, rows: &[R]) -> Result<()> {
    let text = match out.format {
        Format::Json => to_json_string(doc)?,
        Format::Csv => to_csv_string(rows)?,
    };
    write_text(out.out.as_deref(), &text)
}
