//! Provenance record written next to every command's outputs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::formats::write_json;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// SHA-256 over the resolved parameters and the bytes of every input file.
    pub config_hash: String,
    pub seeds: BTreeMap<String, u64>,
    pub versions: BTreeMap<String, String>,
    pub started: String,
    pub finished: String,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn start(command: &str) -> Self {
        let versions = [
            ("qdarwin", env!("CARGO_PKG_VERSION")),
            ("qdarwin-core", qdarwin_core::VERSION),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v.to_owned()))
        .collect();
        RunManifest {
            command: command.to_owned(),
            config_hash: String::new(),
            seeds: BTreeMap::new(),
            versions,
            started: now(),
            finished: String::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn seed(&mut self, name: &str, value: u64) {
        self.seeds.insert(name.to_owned(), value);
    }

    /// Writes the manifest to `path`, stamping the finish time.
    pub fn finish(mut self, path: &Path) -> Result<Self> {
        self.finished = now();
        write_json(path, &self)?;
        Ok(self)
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

/// Manifest path belonging to a primary output: `out.json` → `out.manifest.json`.
pub fn manifest_path(primary: &Path) -> PathBuf {
    primary.with_extension("manifest.json")
}

/// File name used by outputs to point at their manifest.
pub fn manifest_ref(manifest: &Path) -> String {
    manifest
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Hex SHA-256 of length-prefixed parts, so part boundaries cannot be shifted.
pub fn hash_parts<'a>(parts: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
