//! Run manifests: every run records its config digest, seed, and a content
//! digest for every file it emitted, so results are auditable after the
//! fact.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Path relative to the output directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub scenario: String,
    pub config_sha256: String,
    pub seed: u64,
    pub tool_version: String,
    pub wall_clock_secs: f64,
    pub files: Vec<ManifestEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Collects emitted files as the run progresses.
pub struct ArtifactLog {
    out_dir: PathBuf,
    entries: Vec<ManifestEntry>,
}

impl ArtifactLog {
    pub fn new(out_dir: impl Into<PathBuf>) -> Result<Self> {
        let out_dir = out_dir.into();
        std::fs::create_dir_all(&out_dir)?;
        Ok(ArtifactLog { out_dir, entries: Vec::new() })
    }

    pub fn out_dir(&self) -> &Path {
        &self.out_dir
    }

    /// Resolve a relative artifact path inside the output directory.
    pub fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    /// Digest an already-written artifact and add it to the manifest.
    pub fn record(&mut self, name: &str) -> Result<()> {
        let full = self.path(name);
        let bytes = std::fs::read(&full)?;
        self.entries.push(ManifestEntry {
            path: name.to_string(),
            sha256: sha256_hex(&bytes),
            bytes: bytes.len() as u64,
        });
        Ok(())
    }

    /// Finish the run: write `manifest.json` itself into the directory.
    pub fn finish(
        mut self,
        scenario: &str,
        config_json: &str,
        seed: u64,
        wall_clock_secs: f64,
    ) -> Result<RunManifest> {
        self.entries.sort_by(|a, b| a.path.cmp(&b.path));
        let manifest = RunManifest {
            scenario: scenario.to_string(),
            config_sha256: sha256_hex(config_json.as_bytes()),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock_secs,
            files: self.entries,
        };
        let path = self.out_dir.join("manifest.json");
        let file = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(file, &manifest)?;
        Ok(manifest)
    }
}
