//! Run manifests: every command run writes one next to its outputs so
//! the run can be reproduced bit for bit from the same inputs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// What produced a run directory. The manifest deliberately excludes
/// timestamps: rerunning the same manifest against the same inputs
/// yields byte-identical outputs, and the hash below names that
/// equivalence class. The wall-clock timestamp only appears in the run
/// directory name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Input file paths or fetch URLs, in argument order.
    pub inputs: Vec<String>,
    /// Every parameter that affects the output.
    pub params: serde_json::Value,
    pub seed: u64,
    pub out_dir: String,
    pub version: String,
}

impl RunManifest {
    pub fn new(
        command: &str,
        inputs: Vec<String>,
        params: serde_json::Value,
        seed: u64,
        out_dir: &Path,
    ) -> Self {
        RunManifest {
            command: command.to_string(),
            inputs,
            params,
            seed,
            out_dir: out_dir.display().to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// First 8 hex characters of the SHA-256 of the canonical JSON.
    pub fn short_hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("manifest serializes");
        let digest = Sha256::digest(&bytes);
        hex::encode(&digest[..4])
    }

    /// Create `<out>/<command>-<timestamp>-<hash>/` and write
    /// `manifest.json` inside it.
    pub fn prepare_run_dir(&self) -> std::io::Result<PathBuf> {
        let timestamp = chrono::Utc::now().format("%Y%m%dT%H%M%SZ");
        let dir = Path::new(&self.out_dir).join(format!(
            "{}-{}-{}",
            self.command,
            timestamp,
            self.short_hash()
        ));
        std::fs::create_dir_all(&dir)?;
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        std::fs::write(dir.join("manifest.json"), text)?;
        Ok(dir)
    }
}
