//! Report envelopes and the single file writer.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, Default)]
pub struct Formats {
    pub json: bool,
    pub text: bool,
    pub csv: bool,
}

impl Formats {
    pub fn parse(list: &[String]) -> Result<Formats, CliError> {
        let mut f = Formats::default();
        for s in list {
            match s.as_str() {
                "json" => f.json = true,
                "text" => f.text = true,
                "csv" => f.csv = true,
                other => return Err(CliError::Config(format!("unknown format `{other}` (expected json, text or csv)"))),
            }
        }
        Ok(f)
    }

    pub fn all() -> Formats {
        Formats { json: true, text: true, csv: true }
    }
}

/// Seconds since the epoch, or SOURCE_DATE_EPOCH when set.
fn timestamp() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.parse().ok()) {
        return t;
    }
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Canonical JSON of a result: serialised through `Value`, so a cached copy
/// parsed back yields the same bytes.
pub fn canonical<R: Serialize>(r: &R) -> Result<String, CliError> {
    let v = serde_json::to_value(r).map_err(|e| CliError::Internal(format!("serialising result: {e}")))?;
    Ok(v.to_string())
}

pub struct Envelope<'a> {
    pub command: &'static str,
    pub cache_key: &'a str,
    pub passed: bool,
    pub summary: String,
    pub config: Value,
    pub result: &'a str,
}

impl Envelope<'_> {
    pub fn render(&self) -> Result<String, CliError> {
        let result: Value =
            serde_json::from_str(self.result).map_err(|e| CliError::Internal(format!("cached result is not JSON: {e}")))?;
        let v = json!({
            "schema": format!("etwist/{}/v1", self.command),
            "tool_version": TOOL_VERSION,
            "command": self.command,
            "generated_at": timestamp(),
            "cache_key": self.cache_key,
            "passed": self.passed,
            "summary": self.summary,
            "config": self.config,
            "result": result,
        });
        let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Internal(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

/// All report files go through here, one at a time.
pub struct Sink {
    pub out_dir: PathBuf,
    pub formats: Formats,
    pub quiet: bool,
}

impl Sink {
    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        std::fs::create_dir_all(&self.out_dir)
            .map_err(|e| CliError::Config(format!("cannot create {}: {e}", self.out_dir.display())))?;
        let path = self.out_dir.join(name);
        let tmp = self.out_dir.join(format!(".{name}.tmp"));
        std::fs::write(&tmp, contents)
            .and_then(|_| std::fs::rename(&tmp, &path))
            .map_err(|e| CliError::Internal(format!("writing {}: {e}", path.display())))?;
        Ok(path)
    }

    /// `<command>.json` and `<command>.txt` as enabled; text also goes to stdout.
    pub fn emit(&self, command: &str, envelope: &str, text: &str) -> Result<(), CliError> {
        if self.formats.json {
            self.write(&format!("{command}.json"), envelope)?;
        }
        if self.formats.text {
            self.write(&format!("{command}.txt"), text)?;
        }
        if !self.quiet {
            print!("{text}");
        }
        Ok(())
    }

    pub fn note(&self, msg: &str) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }
}

pub fn display_path(p: &Path) -> String {
    p.display().to_string()
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.6e}"))
}
