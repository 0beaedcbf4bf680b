use std::path::{Path, PathBuf};

use serde_json::{json, Value};

/// Collects the files a command writes and records them in `manifest.json`.
pub struct Manifest {
    root: PathBuf,
    command: String,
    parameters: Value,
    files: Vec<Value>,
}

impl Manifest {
    pub fn new(root: &Path, command: &str, parameters: Value) -> anyhow::Result<Self> {
        std::fs::create_dir_all(root)?;
        Ok(Self { root: root.to_path_buf(), command: command.to_string(), parameters, files: Vec::new() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn record(&mut self, name: &str, description: &str, parameters: Value) {
        self.files.push(json!({ "path": name, "description": description, "parameters": parameters }));
    }

    pub fn finish(self) -> anyhow::Result<PathBuf> {
        let path = self.root.join("manifest.json");
        let doc = json!({
            "command": self.command,
            "version": concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")),
            "parameters": self.parameters,
            "files": self.files,
        });
        std::fs::write(&path, serde_json::to_string_pretty(&doc)? + "\n")?;
        Ok(path)
    }
}

/// Pretty JSON with a trailing newline.
pub fn write_json(path: &Path, value: &Value) -> anyhow::Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}
