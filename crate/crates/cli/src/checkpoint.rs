//! Resumable counting: completed samples keyed by family, parameters and
//! bound.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};
use stacky_heights::counting::Family;

use crate::output::SCHEMA;
use crate::parse::UsageError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    /// Family name with parameters, e.g. `bmun:3`.
    pub family: String,
    pub bound: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub schema: String,
    pub entries: Vec<Entry>,
    #[serde(skip)]
    path: PathBuf,
}

impl Checkpoint {
    /// Load `path`, or start empty when it does not exist.
    pub fn open(path: &Path) -> anyhow::Result<Self> {
        if !path.exists() {
            return Ok(Checkpoint { schema: SCHEMA.into(), entries: Vec::new(), path: path.into() });
        }
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut c: Checkpoint = serde_json::from_str(&text)
            .map_err(|e| UsageError(format!("checkpoint {}: {e}", path.display())))?;
        if c.schema != SCHEMA {
            return Err(UsageError(format!("checkpoint schema {:?} is not {SCHEMA:?}", c.schema)).into());
        }
        c.path = path.into();
        Ok(c)
    }

    pub fn get(&self, family: &Family, bound: f64) -> Option<u64> {
        let key = family.to_string();
        self.entries
            .iter()
            .find(|e| e.family == key && e.bound.to_bits() == bound.to_bits())
            .map(|e| e.count)
    }

    /// Record a sample and persist the whole file atomically.
    pub fn record(&mut self, family: &Family, bound: f64, count: u64) -> anyhow::Result<()> {
        if self.get(family, bound).is_none() {
            self.entries.push(Entry { family: family.to_string(), bound, count });
        }
        let tmp = self.path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(self)?)
            .with_context(|| format!("writing {}", tmp.display()))?;
        std::fs::rename(&tmp, &self.path).with_context(|| format!("writing {}", self.path.display()))?;
        Ok(())
    }
}
