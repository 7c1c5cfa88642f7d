use std::ffi::OsString;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// Provenance embedded in every output file. Wall time is only recorded on
/// request because it would make repeated runs differ.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_sha256: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum_sha256: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

pub struct ManifestBuilder {
    manifest: RunManifest,
    started: Option<Instant>,
}

impl ManifestBuilder {
    pub fn new(args: &[OsString], timing: bool) -> Self {
        ManifestBuilder {
            manifest: RunManifest {
                tool: env!("CARGO_PKG_NAME").into(),
                version: env!("CARGO_PKG_VERSION").into(),
                command: args
                    .iter()
                    .skip(1)
                    .map(|a| a.to_string_lossy().into_owned())
                    .collect(),
                seeds: Vec::new(),
                graph_sha256: None,
                spectrum_sha256: None,
                wall_time_s: None,
            },
            started: timing.then(Instant::now),
        }
    }

    pub fn seed(&mut self, seed: u64) {
        self.manifest.seeds.push(seed);
    }

    pub fn graph_hash(&mut self, hash: String) {
        self.manifest.graph_sha256 = Some(hash);
    }

    pub fn spectrum_hash(&mut self, hash: String) {
        self.manifest.spectrum_sha256 = Some(hash);
    }

    pub fn finish(&self) -> RunManifest {
        let mut m = self.manifest.clone();
        m.wall_time_s = self.started.map(|t| t.elapsed().as_secs_f64());
        m
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn read_hashed(path: &Path) -> Result<(Vec<u8>, String)> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let hash = sha256_hex(&bytes);
    Ok((bytes, hash))
}
