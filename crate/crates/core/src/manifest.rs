//! Run manifests written next to CLI outputs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

/// `count` consecutive seeds starting at `start`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRange {
    pub start: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// The full command line; replaying it reproduces the outputs.
    pub argv: Vec<String>,
    pub config: Value,
    pub catalog_hash: String,
    pub seeds: Vec<SeedRange>,
    pub version: String,
    /// Wall-clock budget in seconds, as a decimal string.
    pub budget_seconds: Option<String>,
    pub outputs: Vec<String>,
    /// Set when a budget stopped the run early and the outputs are partial.
    pub partial: Option<String>,
}

impl RunManifest {
    pub fn new(command: &str, argv: Vec<String>, config: Value, catalog_hash: &str) -> RunManifest {
        RunManifest {
            command: command.into(),
            argv,
            config,
            catalog_hash: catalog_hash.into(),
            seeds: Vec::new(),
            version: env!("CARGO_PKG_VERSION").into(),
            budget_seconds: None,
            outputs: Vec::new(),
            partial: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<RunManifest> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// `<out>.manifest.json`.
pub fn manifest_path_for(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut m = RunManifest::new("ball", vec!["nilreg".into(), "ball".into()], serde_json::json!({"radius": 3}), "ab");
        m.seeds.push(SeedRange { start: 5, count: 2 });
        m.outputs.push("x.csv".into());
        let p = dir.path().join("m.json");
        m.save(&p).unwrap();
        assert_eq!(RunManifest::load(&p).unwrap(), m);
        assert_eq!(manifest_path_for(Path::new("out/x.csv")), Path::new("out/x.csv.manifest.json"));
    }
}
