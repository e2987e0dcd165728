//! Run manifests: every JSON report embeds one, so a result can be traced
//! back to the exact command, configuration, seed and input files that
//! produced it. Identical manifests imply bit-identical numerical outputs;
//! the wall-clock duration is the one field that varies between reruns.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub seed: u64,
    pub tool_version: String,
    pub rng: String,
    pub inputs: Vec<InputDigest>,
    pub duration_ms: u128,
}

pub struct ManifestBuilder {
    command: String,
    config: serde_json::Value,
    seed: u64,
    inputs: Vec<InputDigest>,
    started: Instant,
}

impl ManifestBuilder {
    pub fn new(command: &str) -> Self {
        ManifestBuilder {
            command: command.to_string(),
            config: serde_json::Value::Null,
            seed: 0,
            inputs: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn config(&mut self, config: serde_json::Value) {
        self.config = config;
    }

    pub fn seed(&mut self, seed: u64) {
        self.seed = seed;
    }

    pub fn record_input(&mut self, path: &Path, bytes: &[u8]) {
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for b in digest {
            hex.push_str(&format!("{b:02x}"));
        }
        self.inputs.push(InputDigest { path: path.display().to_string(), sha256: hex });
    }

    pub fn finish(self) -> RunManifest {
        RunManifest {
            command: self.command,
            config: self.config,
            seed: self.seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            rng: scram_core::scram::RNG_ALGORITHM.to_string(),
            inputs: self.inputs,
            duration_ms: self.started.elapsed().as_millis(),
        }
    }
}
