use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::Ctx;
use crate::output::{canonical, display_path, Envelope};
use crate::CliError;

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Directory holding earlier `<command>.json` reports (default: the output directory).
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportEntry {
    pub file: String,
    pub command: String,
    pub schema: String,
    pub tool_version: String,
    pub cache_key: String,
    pub passed: bool,
    pub summary: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportSummary {
    pub input: String,
    pub entries: Vec<ReportEntry>,
    pub passed: usize,
    pub failed: usize,
}

fn entry(file: &str, v: &Value) -> Option<ReportEntry> {
    let schema = v.get("schema")?.as_str()?;
    if !schema.starts_with("etwist/") || schema.starts_with("etwist/report/") {
        return None;
    }
    let s = |k: &str| v.get(k).and_then(Value::as_str).map(str::to_string);
    Some(ReportEntry {
        file: file.to_string(),
        command: s("command")?,
        schema: schema.to_string(),
        tool_version: s("tool_version")?,
        cache_key: s("cache_key")?,
        passed: v.get("passed")?.as_bool()?,
        summary: s("summary").unwrap_or_default(),
    })
}

pub fn collect(dir: &std::path::Path) -> Result<Vec<ReportEntry>, CliError> {
    let rd = std::fs::read_dir(dir).map_err(|e| CliError::Config(format!("cannot read {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = rd
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for path in files {
        let Ok(src) = std::fs::read_to_string(&path) else { continue };
        let Ok(v) = serde_json::from_str::<Value>(&src) else { continue };
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        if let Some(e) = entry(&name, &v) {
            out.push(e);
        }
    }
    Ok(out)
}

pub fn run(args: &ReportArgs, ctx: &Ctx) -> Result<bool, CliError> {
    let dir = args.input.clone().unwrap_or_else(|| ctx.sink.out_dir.clone());
    let entries = collect(&dir)?;
    if entries.is_empty() {
        return Err(CliError::Config(format!("no etwist reports found in {}", display_path(&dir))));
    }
    let passed = entries.iter().filter(|e| e.passed).count();
    let summary = ReportSummary { input: display_path(&dir), failed: entries.len() - passed, passed, entries };
    let mut t = String::new();
    let _ = writeln!(t, "report  input={}", summary.input);
    for e in &summary.entries {
        let _ = writeln!(t, "{:5} {:11} {}  ({})", if e.passed { "PASS" } else { "FAIL" }, e.command, e.summary, e.file);
    }
    let _ = writeln!(t, "{} passed, {} failed", summary.passed, summary.failed);
    let all = summary.failed == 0;
    let json = canonical(&summary)?;
    let env = Envelope {
        command: "report",
        cache_key: "",
        passed: all,
        summary: format!("{} passed, {} failed", summary.passed, summary.failed),
        config: serde_json::json!({ "input": summary.input }),
        result: &json,
    };
    ctx.sink.emit("report", &env.render()?, &t)?;
    Ok(all)
}
