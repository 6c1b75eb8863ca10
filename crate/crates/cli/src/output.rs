use std::io::Write;
use std::path::Path;

use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

/// A command result in all three renderings.
pub struct Report {
    pub json: Value,
    pub csv: String,
    pub pretty: String,
    pub default_format: Format,
}

impl Report {
    pub fn emit(&self, format: Option<Format>, path: Option<&Path>) -> std::io::Result<()> {
        let mut text = match format.unwrap_or(self.default_format) {
            Format::Csv => self.csv.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serialisable report"),
            Format::Pretty => self.pretty.clone(),
        };
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match path {
            Some(p) => std::fs::write(p, text),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                out.flush()
            }
        }
    }
}

pub struct Outcome {
    pub report: Report,
    pub pass: bool,
}

/// Shortest round-trip decimal, with `inf`/`-inf` literals.
pub fn num(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

/// JSON number, or the strings `"inf"`/`"-inf"`/`"nan"`.
pub fn jnum(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::from(num(x))
    }
}

/// `key: value` lines.
pub fn pretty_pairs(pairs: &[(&str, String)]) -> String {
    let w = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    pairs.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
}
