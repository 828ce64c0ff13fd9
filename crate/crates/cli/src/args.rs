//! Command-line flags and the optional config file that can supply them.

use crate::error::{CliError, CliResult};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ggc_fading::config::{parse_spec, Spec};
use ggc_fading::ordering::Grid;
use ggc_fading::simkit::db_grid;
use ggc_fading::{McOptions, Modulation};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "ggc", version, about = "Fading channels as generalized gamma convolutions")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Opts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Class tags, diversity, mean, Thorin measure and h(0+) of a channel.
    Describe,
    /// Evaluate a performance metric on an SNR grid or at outage thresholds.
    Metric(MetricArgs),
    /// Compare two channels, or one channel against its Nakagami benchmark.
    Compare(CompareArgs),
    /// Write the data behind one of the reference figures.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug)]
pub struct MetricArgs {
    #[arg(value_enum)]
    pub metric: MetricKind,
    /// Outage thresholds on the channel power (comma separated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub threshold: Vec<f64>,
    /// Add the high-SNR approximation c_Q h(1/ρ) ρ^(-D) as a column.
    #[arg(long)]
    pub asymptotic: bool,
    /// Estimate the SER by simulation instead of the exact paths.
    #[arg(long)]
    pub simulate: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    SerDpsk,
    SerMpsk,
    Capacity,
    Outage,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(value_enum)]
    pub mode: CompareMode,
    /// Metric for `benchmark`.
    #[arg(long, value_enum, default_value = "ser-dpsk")]
    pub metric: BenchKind,
    /// Lower end of the transform grid for the order checks.
    #[arg(long, default_value_t = 1e-3)]
    pub grid_lo: f64,
    #[arg(long, default_value_t = 1e3)]
    pub grid_hi: f64,
    #[arg(long, default_value_t = 200)]
    pub grid_points: usize,
}

impl CompareArgs {
    pub fn grid(&self) -> CliResult<Grid> {
        if !(self.grid_lo > 0.0 && self.grid_hi > self.grid_lo && self.grid_points >= 2) {
            return Err(CliError::Usage(
                "the order grid needs 0 < --grid-lo < --grid-hi and --grid-points >= 2".into(),
            ));
        }
        Ok(Grid {
            lo: self.grid_lo,
            hi: self.grid_hi,
            points: self.grid_points,
        })
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompareMode {
    LtOrder,
    ShannonOrder,
    SnrGain,
    Benchmark,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchKind {
    SerDpsk,
    SerMpsk,
    Capacity,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    #[arg(long, value_enum, default_value = "desk")]
    pub scale: Scale,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig1,
    Fig2,
    Fig34,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Desk,
    Full,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Table,
}

/// Flags shared by every subcommand. All are optional so that values coming
/// from `--config` can be told apart from defaults.
#[derive(Args, Debug, Clone, Default, Serialize)]
pub struct Opts {
    /// Channel or system spec: inline JSON/TOML, or @path to a file.
    #[arg(long, global = true)]
    pub channel: Option<String>,
    /// Second channel for `compare`.
    #[arg(long, global = true)]
    pub channel2: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub rho_db_start: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub rho_db_stop: Option<f64>,
    #[arg(long, global = true)]
    pub rho_db_step: Option<f64>,
    /// dpsk, bpsk, qpsk or mpsk:M.
    #[arg(long = "mod", global = true)]
    #[serde(rename = "mod")]
    pub modulation: Option<String>,
    /// Samples per SNR point (simulation) or per Monte-Carlo estimate.
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file (directory for `reproduce`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// TOML or JSON file with any of the flags above; it wins on conflict.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

/// Keys accepted in a `--config` file.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileOpts {
    channel: Option<serde_json::Value>,
    channel2: Option<serde_json::Value>,
    rho_db_start: Option<f64>,
    rho_db_stop: Option<f64>,
    rho_db_step: Option<f64>,
    #[serde(rename = "mod", alias = "modulation")]
    modulation: Option<String>,
    samples: Option<u64>,
    seed: Option<u64>,
    threads: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Config-file channel entries are either spec objects or the same strings
/// the flags take; `@path` is resolved against the file's directory.
fn spec_text(v: serde_json::Value, base: &Path) -> String {
    match v {
        serde_json::Value::String(s) => match s.strip_prefix('@') {
            Some(p) if Path::new(p).is_relative() => format!("@{}", base.join(p).display()),
            _ => s,
        },
        other => other.to_string(),
    }
}

macro_rules! merge {
    ($dst:expr, $src:expr, $flag:literal) => {
        if let Some(v) = $src {
            if $dst.as_ref().is_some_and(|d| *d != v) {
                eprintln!("warning: --{} from the command line is overridden by the config file", $flag);
            }
            $dst = Some(v);
        }
    };
}

impl Opts {
    /// Applies `--config`, if any.
    pub fn resolve(mut self) -> CliResult<Opts> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = read(&path)?;
        let value = ggc_fading::config::parse_value(&text)?;
        let file: FileOpts = serde_json::from_value(value)
            .map_err(|e| CliError::Usage(format!("config file {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        merge!(self.channel, file.channel.map(|v| spec_text(v, &base)), "channel");
        merge!(self.channel2, file.channel2.map(|v| spec_text(v, &base)), "channel2");
        merge!(self.rho_db_start, file.rho_db_start, "rho-db-start");
        merge!(self.rho_db_stop, file.rho_db_stop, "rho-db-stop");
        merge!(self.rho_db_step, file.rho_db_step, "rho-db-step");
        merge!(self.modulation, file.modulation, "mod");
        merge!(self.samples, file.samples, "samples");
        merge!(self.seed, file.seed, "seed");
        merge!(self.threads, file.threads, "threads");
        merge!(self.out, file.out.map(|p| if p.is_relative() { base.join(p) } else { p }), "out");
        merge!(self.format, file.format, "format");
        Ok(self)
    }

    fn load(text: &str) -> CliResult<Spec> {
        let body = match text.strip_prefix('@') {
            Some(p) => read(Path::new(p))?,
            None => text.to_string(),
        };
        Ok(parse_spec(&body)?)
    }

    pub fn spec(&self) -> CliResult<Spec> {
        let text = self
            .channel
            .as_deref()
            .ok_or_else(|| CliError::Usage("--channel is required".into()))?;
        Self::load(text)
    }

    pub fn spec2(&self) -> CliResult<Spec> {
        let text = self
            .channel2
            .as_deref()
            .ok_or_else(|| CliError::Usage("--channel2 is required".into()))?;
        Self::load(text)
    }

    /// SNR grid from the flags, falling back to `default` per field.
    pub fn grid(&self, default: (f64, f64, f64)) -> CliResult<Vec<f64>> {
        let start = self.rho_db_start.unwrap_or(default.0);
        let stop = self.rho_db_stop.unwrap_or(default.1);
        let step = self.rho_db_step.unwrap_or(default.2);
        Ok(db_grid(start, stop, step)?)
    }

    pub fn modulation(&self, default: Modulation) -> CliResult<Modulation> {
        match &self.modulation {
            Some(m) => Ok(m.parse()?),
            None => Ok(default),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(1)
    }

    pub fn mc(&self) -> McOptions {
        McOptions {
            seed: self.seed(),
            samples: self.samples.unwrap_or(McOptions::default().samples),
        }
    }
}
