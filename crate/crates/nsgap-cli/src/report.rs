use std::path::Path;

use serde_json::{json, Map, Value as Json};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A command failure carrying its process exit code: 2 validation,
/// 3 budget exceeded, 4 non-convergence.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    pub fn non_convergence(message: impl Into<String>) -> Failure {
        Failure {
            code: 4,
            message: message.into(),
        }
    }
}

impl From<nsgap::Error> for Failure {
    fn from(e: nsgap::Error) -> Failure {
        use nsgap::Error;
        let code = match &e {
            Error::BudgetExceeded { .. } | Error::DenominatorCap { .. } => 3,
            Error::SpectrumOutOfRange { .. } | Error::GenerationFailed { .. } => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// One flat JSON object: the result's own fields plus `version`, `command`,
/// `spec` (the full input echo), and `calibration` (constants in effect).
/// serde_json's map is ordered, so serialization is byte-stable.
pub fn envelope(command: &str, spec: Json, calibration: Json, result: Json) -> Json {
    let mut map = match result {
        Json::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    map.insert("version".into(), json!(VERSION));
    map.insert("command".into(), json!(command));
    map.insert("spec".into(), spec);
    map.insert("calibration".into(), calibration);
    Json::Object(map)
}

/// Comment preamble for CSV reports; parsers here treat '#' lines as noise.
pub fn csv_preamble(command: &str, spec: &Json, calibration: &Json) -> String {
    format!("# nsgap {VERSION} {command}\n# spec {spec}\n# calibration {calibration}\n")
}

/// Quotes a CSV field when it holds a comma, quote, or line break.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn emit_json(report: &Json, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = report.to_string();
    text.push('\n');
    emit_text(&text, out)
}

/// Reports land on stdout, or atomically (write-then-rename) at --out.
pub fn emit_text(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => atomic_write(path, text),
    }
}

pub fn atomic_write(path: &Path, text: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{}.{}.tmp", name, std::process::id()));
    let io_fail = |op: &str, e: std::io::Error| {
        Failure::validation(format!("cannot {op} {}: {e}", path.display()))
    };
    std::fs::write(&tmp, text).map_err(|e| io_fail("write", e))?;
    std::fs::rename(&tmp, path).map_err(|e| io_fail("finalize", e))
}
