use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use lightscope::patterns::QuadratureSettings;
use serde::{Deserialize, Serialize};

use crate::commands::Invocation;

/// Written next to every run's outputs. Replaying the stored invocation
/// reproduces the outputs byte for byte.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub invocation: Invocation,
    pub quadrature: QuadratureSettings,
    pub outputs: Vec<String>,
    pub version: String,
    pub threads: usize,
    pub wall_time_seconds: f64,
}

impl RunManifest {
    pub fn file_name(command: &str) -> String {
        format!("{command}.manifest.json")
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(Self::file_name(&self.command));
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}
