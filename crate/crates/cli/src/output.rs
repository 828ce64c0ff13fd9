//! Output files and the run manifest that accompanies them.

use crate::error::{CliError, CliResult};
use serde::Serialize;
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Serialize, Debug)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub config: Value,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub outputs: Vec<String>,
    pub wall_clock_s: f64,
}

pub fn write(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn to_json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

/// Collects outputs of one run and writes the manifest last.
pub struct Run {
    started: Instant,
    command: Vec<String>,
    config: Value,
    seed: Option<u64>,
    outputs: Vec<String>,
}

impl Run {
    pub fn new(config: Value, seed: Option<u64>) -> Self {
        let mut command: Vec<String> = std::env::args().collect();
        if let Some(first) = command.first_mut() {
            *first = "ggc".into();
        }
        Run {
            started: Instant::now(),
            command,
            config,
            seed,
            outputs: Vec::new(),
        }
    }

    pub fn write(&mut self, path: &Path, text: &str) -> CliResult<()> {
        write(path, text)?;
        self.outputs.push(path.display().to_string());
        Ok(())
    }

    pub fn finish(self, path: &Path) -> CliResult<()> {
        let m = RunManifest {
            command: self.command,
            config: self.config,
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION"),
            outputs: self.outputs,
            wall_clock_s: self.started.elapsed().as_secs_f64(),
        };
        write(path, &to_json(&m))
    }
}

/// `report.csv` → `report.csv.manifest.json`.
pub fn manifest_for(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    path.with_file_name(name)
}

/// Quotes a CSV field when needed.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Seventeen significant digits, as in the curve files.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}
