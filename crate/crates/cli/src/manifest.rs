use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct FileEntry {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Everything needed to rerun and check a run. Holds no timestamps, so
/// reruns of one config produce identical manifests.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub library_version: &'static str,
    pub command: String,
    /// The resolved config, flags applied, as written next to the outputs.
    pub config: FileEntry,
    pub source_config: Option<String>,
    pub threads: Option<usize>,
    pub allow_flagged: bool,
    pub flags: Vec<String>,
    pub files: Vec<FileEntry>,
}

pub fn sha256_hex(data: &[u8]) -> String {
    format!("{:x}", Sha256::digest(data))
}

pub fn entry(dir: &Path, rel: &Path) -> std::io::Result<FileEntry> {
    let data = fs::read(dir.join(rel))?;
    Ok(FileEntry {
        path: rel.to_string_lossy().into_owned(),
        bytes: data.len() as u64,
        sha256: sha256_hex(&data),
    })
}

/// Writes `manifest.json` into `dir`, hashing `config` and every file in `files`.
#[allow(clippy::too_many_arguments)]
pub fn write(
    dir: &Path,
    command: &str,
    config: &Path,
    source_config: Option<&Path>,
    threads: Option<usize>,
    allow_flagged: bool,
    flags: &[String],
    files: &[PathBuf],
) -> std::io::Result<PathBuf> {
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        library_version: dunkl_spectral::VERSION,
        command: command.to_string(),
        config: entry(dir, config)?,
        source_config: source_config.map(|p| p.to_string_lossy().into_owned()),
        threads,
        allow_flagged,
        flags: flags.to_vec(),
        files: files
            .iter()
            .map(|f| entry(dir, f))
            .collect::<std::io::Result<_>>()?,
    };
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).map_err(std::io::Error::other)?;
    fs::write(&path, text + "\n")?;
    Ok(path)
}
