//! Run configuration from defaults, a TOML file, `STACKY_THREADS` and flags,
//! in increasing priority.

use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use stacky_heights::counting::{geometric_schedule, Family};

use crate::parse::{usage, UsageError};

pub const THREADS_ENV: &str = "STACKY_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Plot,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    pub b0: f64,
    pub ratio: f64,
    pub steps: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { b0: 2.0, ratio: 2.0, steps: 10 }
    }
}

impl Schedule {
    pub fn bounds(&self) -> stacky_heights::Result<Vec<f64>> {
        geometric_schedule(self.b0, self.ratio, self.steps)
    }
}

/// Config file contents; every key is optional.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub family: Option<String>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    pub schedule: Option<PartialSchedule>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialSchedule {
    pub b0: Option<f64>,
    pub ratio: Option<f64>,
    pub steps: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).map_err(|e| UsageError(format!("config {}: {e}", path.display())).into())
    }
}

/// A fully resolved configuration. Invariants: the schedule increases
/// strictly and `threads >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: String,
    pub format: Format,
    pub threads: usize,
    pub seed: u64,
    pub schedule: Schedule,
}

/// Values given on the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub family: Option<String>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    pub b0: Option<f64>,
    pub ratio: Option<f64>,
    pub steps: Option<usize>,
}

/// Thread count from the flag, then the environment, then the file, then
/// the available parallelism.
pub fn resolve_threads(flag: Option<usize>, file: Option<usize>) -> Result<usize, UsageError> {
    let env = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| UsageError(format!("{THREADS_ENV}={v:?} is not a count")))?),
        Err(_) => None,
    };
    let threads = flag
        .or(env)
        .or(file)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if threads == 0 {
        return usage("thread count must be >= 1");
    }
    Ok(threads)
}

impl RunConfig {
    pub fn resolve(file: ConfigFile, o: Overrides) -> Result<Self, UsageError> {
        let s = file.schedule.unwrap_or_default();
        let d = Schedule::default();
        let schedule = Schedule {
            b0: o.b0.or(s.b0).unwrap_or(d.b0),
            ratio: o.ratio.or(s.ratio).unwrap_or(d.ratio),
            steps: o.steps.or(s.steps).unwrap_or(d.steps),
        };
        if !(schedule.b0 > 0.0 && schedule.ratio > 1.0) {
            return usage("schedule needs b0 > 0 and ratio > 1");
        }
        let Some(family) = o.family.or(file.family) else {
            return usage("no family given (use --family or the config file)");
        };
        Ok(RunConfig {
            family,
            format: o.format.or(file.format).unwrap_or(Format::Csv),
            threads: resolve_threads(o.threads, file.threads)?,
            seed: o.seed.or(file.seed).unwrap_or(0),
            schedule,
        })
    }

    pub fn family(&self) -> Result<Family, UsageError> {
        self.family.parse().map_err(|e| UsageError(format!("{e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

/// `out.csv` -> `out.config.toml`.
pub fn config_path_for(out: &Path) -> PathBuf {
    out.with_extension("config.toml")
}
