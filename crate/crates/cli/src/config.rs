//! Config file loading and the flag-over-file merge.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Top level of the TOML config: `out-dir`, `threads`, and one table per
/// subcommand.
#[derive(Debug, Default)]
pub struct FileConfig {
    pub out_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    pub sections: BTreeMap<String, toml::Table>,
}

impl FileConfig {
    pub fn load(path: &Path, known: &[&str]) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let table: toml::Table = text
            .parse()
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = FileConfig::default();
        for (key, value) in table {
            match (key.as_str(), value) {
                ("out-dir", toml::Value::String(s)) => cfg.out_dir = Some(s.into()),
                ("threads", toml::Value::Integer(n)) if n > 0 => cfg.threads = Some(n as usize),
                (name, toml::Value::Table(t)) if known.contains(&name) => {
                    cfg.sections.insert(name.to_string(), t);
                }
                (name, _) => return Err(CliError::Config(format!("unknown or malformed top-level key `{name}`"))),
            }
        }
        Ok(cfg)
    }
}

/// Flags overwrite keys from the file section; the result must parse as `C`.
pub fn merge<C: Serialize + DeserializeOwned>(name: &str, section: Option<&toml::Table>, flags: &C) -> Result<C, CliError> {
    let mut merged = section.cloned().unwrap_or_default();
    let over = toml::Value::try_from(flags).map_err(|e| CliError::Config(e.to_string()))?;
    if let toml::Value::Table(t) = over {
        merged.extend(t);
    }
    toml::Value::Table(merged)
        .try_into()
        .map_err(|e| CliError::Config(format!("[{name}] {e}")))
}

pub fn to_table<C: Serialize>(c: &C) -> toml::Table {
    match toml::Value::try_from(c) {
        Ok(toml::Value::Table(t)) => t,
        _ => toml::Table::new(),
    }
}

/// SHA-256 of the subcommand name and its resolved parameters.
pub fn config_hash<C: Serialize>(name: &str, c: &C) -> String {
    let mut h = Sha256::new();
    h.update(name.as_bytes());
    h.update(b"\n");
    h.update(toml::to_string(&to_table(c)).unwrap_or_default().as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
