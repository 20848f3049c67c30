use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of_file(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        })
    }
}

/// Provenance record written next to command outputs. Contains no timestamps so
/// repeated runs on the same inputs produce identical manifests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_digest: String,
    pub input_digests: Vec<InputDigest>,
    pub tool_version: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    /// `config_digest` hashes the config file when one was given, otherwise the command line.
    pub fn new(command: String, config_digest: Option<&str>, input_digests: Vec<InputDigest>) -> Self {
        let config_digest = config_digest
            .map(str::to_string)
            .unwrap_or_else(|| sha256_hex(command.as_bytes()));
        RunManifest {
            command,
            config_digest,
            input_digests,
            tool_version: crate::VERSION.to_string(),
            outputs: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

/// Write via a temp file in the target directory and rename into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(contents).with_context(|| format!("writing {}", path.display()))?;
    tmp.persist(path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// Manifest path for a single-file output: `<out>.manifest.json`.
pub fn manifest_path_for(out: &Path) -> std::path::PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}
