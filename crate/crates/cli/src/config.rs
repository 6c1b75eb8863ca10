//! `--config file.json`: keys become flags unless already given.

use std::ffi::OsString;

use serde_json::Value;

pub fn merged_args(mut argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(pos) = argv.iter().position(|a| a == "--config" || a.to_string_lossy().starts_with("--config=")) else {
        return Ok(argv);
    };
    let arg = argv[pos].to_string_lossy().into_owned();
    let path = match arg.strip_prefix("--config=") {
        Some(p) => p.to_string(),
        None => argv
            .get(pos + 1)
            .map(|p| p.to_string_lossy().into_owned())
            .ok_or("--config needs a path")?,
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("--config {path}: {e}"))?;
    let obj: serde_json::Map<String, Value> =
        serde_json::from_str(&text).map_err(|e| format!("--config {path}: expected a JSON object: {e}"))?;

    let present: Vec<String> = argv
        .iter()
        .filter_map(|a| a.to_str())
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();
    for (key, value) in obj {
        let flag = key.replace('_', "-");
        if flag == "config" || present.contains(&flag) {
            continue;
        }
        let values = match value {
            Value::Array(items) => items,
            v => vec![v],
        };
        for v in values {
            match v {
                Value::Bool(true) => argv.push(format!("--{flag}").into()),
                Value::Bool(false) | Value::Null => {}
                Value::String(s) => {
                    argv.push(format!("--{flag}").into());
                    argv.push(s.into());
                }
                other => {
                    argv.push(format!("--{flag}").into());
                    argv.push(other.to_string().into());
                }
            }
        }
    }
    Ok(argv)
}
