//! Output files with an embedded metadata header.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub config: Value,
}

impl Metadata {
    pub fn new(command: &'static str, seed: u64, config: &impl Serialize) -> Self {
        Metadata {
            tool: "spinqec",
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            config: serde_json::to_value(config).unwrap_or(Value::Null),
        }
    }

    /// `#`-prefixed lines for CSV and text files.
    pub fn comment_block(&self) -> String {
        format!(
            "# {} {}\n# command: {}\n# seed: {}\n# config: {}\n",
            self.tool, self.version, self.command, self.seed, self.config
        )
    }

    /// Adds a `metadata` member to a JSON object.
    pub fn attach(&self, mut doc: Value) -> Value {
        if let Value::Object(map) = &mut doc {
            map.insert("metadata".into(), json!(self));
        }
        doc
    }
}

pub fn resolve(out_dir: &Path, explicit: Option<&PathBuf>, default_name: &str) -> PathBuf {
    explicit
        .cloned()
        .unwrap_or_else(|| out_dir.join(default_name))
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)
            .map_err(|e| CliError::Failed(format!("cannot create {}: {e}", parent.display())))?;
    }
    fs::write(path, contents)
        .map_err(|e| CliError::Failed(format!("cannot write {}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

pub fn write_json(path: &Path, doc: &Value) -> Result<(), CliError> {
    let mut text =
        serde_json::to_string_pretty(doc).map_err(|e| CliError::Failed(e.to_string()))?;
    text.push('\n');
    write(path, &text)
}
