//! Parameter resolution: a JSON config file, overlaid by command-line flags,
//! checked against the command's key list and then deserialized.

use crate::Failure;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};
use std::fs;
use std::path::{Path, PathBuf};

pub const SEED_VAR: &str = "PB_SEED";

/// Merged parameters of one command before typing.
#[derive(Debug, Clone, Default)]
pub struct Params {
    map: Map<String, Value>,
}

impl Params {
    /// Reads `config` (if any) and overlays every flag that was given.
    pub fn resolve(config: Option<&Path>, flags: &impl Serialize) -> Result<Self, Failure> {
        let mut map = match config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
                match serde_json::from_str::<Value>(&text) {
                    Ok(Value::Object(m)) => m,
                    Ok(_) => return Err(Failure::config(format!("{} is not a JSON object", path.display()))),
                    Err(e) => return Err(Failure::config(format!("{}: {e}", path.display()))),
                }
            }
            None => Map::new(),
        };
        match serde_json::to_value(flags).map_err(|e| Failure::other(e.to_string()))? {
            Value::Object(flags) => {
                for (k, v) in flags {
                    if !v.is_null() {
                        map.insert(k, v);
                    }
                }
            }
            _ => unreachable!("flag structs serialize to objects"),
        }
        Ok(Self { map })
    }

    /// Replaces `seed` with `PB_SEED` when that is set.
    pub fn apply_seed_env(&mut self) -> Result<(), Failure> {
        if let Ok(raw) = std::env::var(SEED_VAR) {
            let seed: u64 = raw
                .trim()
                .parse()
                .map_err(|_| Failure::config(format!("{SEED_VAR}='{raw}' is not an unsigned integer")))?;
            self.map.insert("seed".into(), Value::from(seed));
        }
        Ok(())
    }

    /// Rejects keys outside `allowed`, naming the first offender.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), Failure> {
        match self.map.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Failure::config(format!("unknown key `{k}`"))),
            None => Ok(()),
        }
    }

    /// Moves the named keys out into their own parameter set.
    pub fn split_off(&mut self, keys: &[&str]) -> Params {
        let mut map = Map::new();
        for &k in keys {
            if let Some(v) = self.map.remove(k) {
                map.insert(k.to_string(), v);
            }
        }
        Params { map }
    }

    pub fn contains(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    pub fn parse<T: DeserializeOwned>(&self) -> Result<T, Failure> {
        serde_json::from_value(Value::Object(self.map.clone())).map_err(|e| Failure::config(e.to_string()))
    }
}

/// A file a command wrote.
#[derive(Debug, Clone, Serialize)]
pub struct Artifact {
    pub path: String,
    pub kind: &'static str,
    pub bytes: u64,
}

/// Output directory plus the record of what went into it.
pub struct Run {
    out: PathBuf,
    command: &'static str,
    artifacts: Vec<Artifact>,
}

impl Run {
    pub fn new(out: &Path, command: &'static str) -> Result<Self, Failure> {
        fs::create_dir_all(out).map_err(|e| Failure::io(out, e))?;
        Ok(Self {
            out: out.to_path_buf(),
            command,
            artifacts: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, kind: &'static str, bytes: &[u8]) -> Result<(), Failure> {
        let path = self.out.join(name);
        fs::write(&path, bytes).map_err(|e| Failure::io(&path, e))?;
        self.artifacts.push(Artifact {
            path: name.to_string(),
            kind,
            bytes: bytes.len() as u64,
        });
        Ok(())
    }

    pub fn write_json(&mut self, name: &str, kind: &'static str, value: &impl Serialize) -> Result<(), Failure> {
        let mut text = serde_json::to_vec_pretty(value).map_err(|e| Failure::other(e.to_string()))?;
        text.push(b'\n');
        self.write(name, kind, &text)
    }

    /// Writes `manifest.json` with the resolved configuration.
    pub fn finish(self, config: &impl Serialize) -> Result<(), Failure> {
        let manifest = serde_json::json!({
            "command": self.command,
            "versions": {
                "pb": env!("CARGO_PKG_VERSION"),
                "partition-balance": partition_balance::VERSION,
            },
            "config": config,
            "artifacts": self.artifacts,
        });
        let path = self.out.join("manifest.json");
        let mut text = serde_json::to_vec_pretty(&manifest).map_err(|e| Failure::other(e.to_string()))?;
        text.push(b'\n');
        fs::write(&path, text).map_err(|e| Failure::io(&path, e))
    }
}
