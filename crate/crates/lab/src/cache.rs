//! Content-addressed on-disk cache of extrapolated spectra.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use driftlap_core::Spectrum;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{LabError, Result};

pub const CACHE_FORMAT: &str = "driftlap-spectrum-cache/v1";

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "DRIFTLAP_CACHE_DIR";

/// SHA-256 over the canonical JSON of `desc`, with object keys sorted, so
/// field order in the source document does not matter.
pub fn cache_key(desc: &Value) -> Result<String> {
    // serde_json's default map is ordered by key
    let canonical = serde_json::to_string(&serde_json::json!({ "format": CACHE_FORMAT, "desc": desc }))?;
    let digest = Sha256::digest(canonical.as_bytes());
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

#[derive(Serialize, Deserialize)]
struct Entry {
    format: String,
    key: String,
    spectrum: Spectrum,
}

#[derive(Debug, Clone)]
pub struct SpectrumCache {
    dir: PathBuf,
}

impl SpectrumCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| LabError::io(&dir, e))?;
        Ok(Self { dir })
    }

    /// Explicit directory first, then the environment override; `None`
    /// disables caching.
    pub fn resolve(explicit: Option<&Path>) -> Result<Option<Self>> {
        match explicit {
            Some(d) => Ok(Some(Self::new(d)?)),
            None => match std::env::var_os(CACHE_DIR_ENV) {
                Some(d) if !d.is_empty() => Ok(Some(Self::new(PathBuf::from(d))?)),
                _ => Ok(None),
            },
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Result<Option<Spectrum>> {
        let path = self.path(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(LabError::io(&path, e)),
        };
        let raw: Value = serde_json::from_str(&text)?;
        let found = raw.get("format").and_then(Value::as_str).unwrap_or("");
        if found != CACHE_FORMAT {
            return Err(LabError::CacheFormat { path, found: found.to_string(), expected: CACHE_FORMAT });
        }
        let entry: Entry = serde_json::from_value(raw)?;
        if entry.key != key {
            return Ok(None);
        }
        Ok(Some(entry.spectrum))
    }

    pub fn store(&self, key: &str, spectrum: &Spectrum) -> Result<()> {
        let entry = Entry { format: CACHE_FORMAT.to_string(), key: key.to_string(), spectrum: spectrum.clone() };
        let bytes = serde_json::to_vec(&entry)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| LabError::io(&self.dir, e))?;
        tmp.write_all(&bytes).map_err(|e| LabError::io(tmp.path(), e))?;
        let path = self.path(key);
        tmp.persist(&path).map_err(|e| LabError::io(&path, e.error))?;
        Ok(())
    }
}
