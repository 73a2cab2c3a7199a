use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::synth::SimulationMetadata;

pub const MANIFEST_FILE: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputFile {
    /// Path relative to the output directory, `/`-separated.
    pub path: String,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_s: Option<f64>,
    pub sha256: String,
}

/// Record of one command run. Contains nothing that varies between
/// identical runs (no timestamps, no absolute output paths).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub config_hash: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<OutputFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationMetadata>,
    /// Per-frame injected noise energy, in snapshot order.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub injected_energy: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config_bytes: &[u8]) -> Self {
        Self {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: sha256_hex(config_bytes),
            inputs: Vec::new(),
            outputs: Vec::new(),
            seed: None,
            rng: None,
            simulation: None,
            injected_energy: Vec::new(),
            failures: Vec::new(),
        }
    }

    /// Write `bytes` to `out_dir/relative` and list the file.
    pub fn write_output(
        &mut self,
        out_dir: &Path,
        relative: &str,
        kind: &str,
        time_s: Option<f64>,
        bytes: &[u8],
    ) -> Result<PathBuf> {
        let path = out_dir.join(relative);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::Io(e).at(parent))?;
        }
        fs::write(&path, bytes).map_err(|e| Error::Io(e).at(&path))?;
        self.outputs.push(OutputFile {
            path: relative.to_string(),
            kind: kind.to_string(),
            time_s,
            sha256: sha256_hex(bytes),
        });
        Ok(path)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    /// Write `manifest.json` into `out_dir`.
    pub fn save(&self, out_dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(out_dir).map_err(|e| Error::Io(e).at(out_dir))?;
        let path = out_dir.join(MANIFEST_FILE);
        fs::write(&path, self.to_json()).map_err(|e| Error::Io(e).at(&path))?;
        Ok(path)
    }
}
