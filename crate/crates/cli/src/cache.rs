//! Content-addressed result store: one JSON file per key.

use std::path::PathBuf;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Cache {
        Cache { dir }
    }

    /// sha256 over the command, the canonical config and the content the
    /// result depends on (catalogue text or model definition), plus the tool version.
    pub fn key<C: Serialize>(command: &str, config: &C, content: &str) -> String {
        let mut h = Sha256::new();
        for part in [command, &serde_json::to_string(config).expect("config serialises"), content, env!("CARGO_PKG_VERSION")] {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part.as_bytes());
        }
        format!("{:x}", h.finalize())
    }

    pub fn get(&self, key: &str) -> Option<String> {
        let dir = self.dir.as_ref()?;
        std::fs::read_to_string(dir.join(format!("{key}.json"))).ok()
    }

    /// Writes through a temporary file and a rename, so readers never see a partial entry.
    pub fn put(&self, key: &str, value: &str) -> std::io::Result<()> {
        let Some(dir) = &self.dir else {
            return Ok(());
        };
        std::fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(".{key}.{}.tmp", std::process::id()));
        std::fs::write(&tmp, value)?;
        std::fs::rename(&tmp, dir.join(format!("{key}.json")))
    }
}
