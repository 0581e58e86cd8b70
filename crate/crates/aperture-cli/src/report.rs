//! Run-report envelope and output plumbing.
//!
//! The `payload` subtree is a pure function of `(config, seed)`: two
//! runs with the same inputs serialize it byte-identically. Wall-clock
//! duration lives in the envelope, outside the payload.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub tool_version: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub duration_ms: u64,
    pub payload: serde_json::Value,
}

impl RunReport {
    pub fn new<C: Serialize, P: Serialize>(
        command: &str,
        seed: u64,
        config: &C,
        duration_ms: u64,
        payload: &P,
    ) -> Result<Self> {
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config: serde_json::to_value(config)?,
            duration_ms,
            payload: serde_json::to_value(payload)?,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The reproducibility surface: payload bytes only.
    pub fn payload_bytes(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.payload)?)
    }

    pub fn write_json(&self, out: Option<&Path>) -> Result<()> {
        let text = self.to_json()?;
        match out {
            Some(path) => std::fs::write(path, text.as_bytes())
                .with_context(|| format!("cannot write report to {}", path.display()))?,
            None => println!("{text}"),
        }
        Ok(())
    }
}

/// A named CSV table produced by a subcommand.
pub struct CsvTable {
    pub name: &'static str,
    pub content: String,
}

/// Writes CSV tables: a single table goes to `out` (or stdout) as-is;
/// several tables get the table name suffixed into the file stem, or
/// `# table:` separators on stdout.
pub fn write_csv_tables(tables: &[CsvTable], out: Option<&Path>) -> Result<()> {
    match out {
        None => {
            for (i, t) in tables.iter().enumerate() {
                if tables.len() > 1 {
                    if i > 0 {
                        println!();
                    }
                    println!("# table: {}", t.name);
                }
                print!("{}", t.content);
            }
        }
        Some(path) => {
            if tables.len() == 1 {
                std::fs::write(path, tables[0].content.as_bytes())
                    .with_context(|| format!("cannot write {}", path.display()))?;
            } else {
                for t in tables {
                    let p = suffixed_path(path, t.name);
                    std::fs::write(&p, t.content.as_bytes())
                        .with_context(|| format!("cannot write {}", p.display()))?;
                }
            }
        }
    }
    Ok(())
}

fn suffixed_path(base: &Path, suffix: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let ext = base
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".to_string());
    base.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

/// One named check in `--check` mode.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

pub fn check(name: &str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Prints per-check lines and returns whether everything passed.
pub fn report_checks(command: &str, checks: &[CheckResult]) -> bool {
    let mut ok = true;
    for c in checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        eprintln!("[{tag}] {command}: {} — {}", c.name, c.detail);
        if !c.passed {
            ok = false;
        }
    }
    ok
}
