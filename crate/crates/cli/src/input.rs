//! Parsing of distribution and function specs given inline or by file.

use serde::Deserialize;
use serde_json::Value;

use renyi_robust::renyi::GaussianParams;
use renyi_robust::{BoundedFunction, FiniteMeasure};

fn load_json(flag: &str, given: &str) -> Result<Value, String> {
    let text = if given.trim_start().starts_with(['[', '{']) {
        given.to_string()
    } else {
        std::fs::read_to_string(given).map_err(|e| format!("{flag}: cannot read {given:?}: {e}"))?
    };
    serde_json::from_str(&text).map_err(|e| format!("{flag}: invalid JSON: {e}"))
}

/// `[p1, p2, …]` or `{"labels": [...], "probs": [...]}`, inline or in a file.
pub fn measure(flag: &str, given: &str) -> Result<FiniteMeasure, String> {
    let v = load_json(flag, given)?;
    let m = if v.is_array() {
        let probs: Vec<f64> = serde_json::from_value(v).map_err(|e| format!("{flag}: {e}"))?;
        FiniteMeasure::from_probs_unlabeled(&probs)
    } else {
        return FiniteMeasure::deserialize(v).map_err(|e| format!("{flag}: {e}"));
    };
    m.map_err(|e| format!("{flag}: {e}"))
}

#[derive(Deserialize)]
struct LabeledValues {
    labels: Vec<String>,
    values: Vec<f64>,
}

/// `[g1, g2, …]` aligned with the measure, or `{"labels": [...], "values": [...]}`.
pub fn function(flag: &str, given: &str, nu: &FiniteMeasure) -> Result<BoundedFunction, String> {
    let v = load_json(flag, given)?;
    let g = if v.is_array() {
        let values: Vec<f64> = serde_json::from_value(v).map_err(|e| format!("{flag}: {e}"))?;
        BoundedFunction::new(values).and_then(|g| g.check_aligned(nu).map(|_| g))
    } else {
        let lv: LabeledValues = serde_json::from_value(v).map_err(|e| format!("{flag}: {e}"))?;
        BoundedFunction::from_labeled(nu, &lv.labels, lv.values)
    };
    g.map_err(|e| format!("{flag}: {e}"))
}

/// `mean,variance`.
pub fn gaussian(flag: &str, given: &str) -> Result<GaussianParams, String> {
    let parts: Vec<&str> = given.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(format!("{flag}: expected 'mean,variance', got {given:?}"));
    }
    let parse = |s: &str| s.parse::<f64>().map_err(|e| format!("{flag}: {s:?}: {e}"));
    GaussianParams::new(parse(parts[0])?, parse(parts[1])?).map_err(|e| format!("{flag}: {e}"))
}

/// Comma-separated reals.
pub fn reals(flag: &str, given: &str) -> Result<Vec<f64>, String> {
    given.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("{flag}: {s:?}: {e}")))
        .collect()
}
