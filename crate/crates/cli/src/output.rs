use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde_json::Value;

/// Full round-trip precision: 17 significant digits.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON file next to `out`: `run.csv` -> `run.json`, `run.json` -> `run.meta.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    if out.extension().is_some_and(|e| e == "json") {
        out.with_extension("meta.json")
    } else {
        out.with_extension("json")
    }
}

pub fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Writes to `out`, or to stdout when it is `None`.
pub fn emit(out: Option<&Path>, content: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, content),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            stdout.flush()
        }
    }
}

/// CSV body with the metadata either in a sidecar (file output) or as
/// leading `#` comment lines (stdout).
pub fn emit_csv(out: Option<&Path>, csv: &str, meta: &Value) -> io::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, csv)?;
            fs::write(sidecar_path(path), pretty(meta))
        }
        None => {
            let header = format!("# {}\n", serde_json::to_string(meta).expect("serializable"));
            emit(None, &(header + csv))
        }
    }
}
