//! Query cache: one JSON file per query hash, written atomically.

use super::{IngestError, SCHEMA_VERSION};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "X0MAPS_CACHE_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub query_hash: String,
    pub query: String,
    /// Seconds since the Unix epoch.
    pub fetched_at: u64,
    pub schema_version: String,
    pub payload: Vec<Value>,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// The directory from [`CACHE_DIR_ENV`], if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV).map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, hash: &str) -> PathBuf {
        self.dir.join(format!("{hash}.json"))
    }

    /// The cached payload, if present with a matching hash and schema version.
    pub fn get(&self, hash: &str) -> Result<Option<CacheEntry>, IngestError> {
        let path = self.path(hash);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(IngestError::Cache(format!("{}: {e}", path.display()))),
        };
        let entry: CacheEntry = serde_json::from_slice(&bytes)
            .map_err(|e| IngestError::Cache(format!("{}: {e}", path.display())))?;
        if entry.query_hash != hash || entry.schema_version != SCHEMA_VERSION {
            return Ok(None);
        }
        Ok(Some(entry))
    }

    /// Writes through a temporary file in the same directory and renames it
    /// into place, so readers never see a partial entry.
    pub fn put(&self, hash: &str, query: &str, payload: Vec<Value>) -> Result<CacheEntry, IngestError> {
        let err = |e: std::io::Error| IngestError::Cache(format!("{}: {e}", self.dir.display()));
        fs::create_dir_all(&self.dir).map_err(err)?;
        let entry = CacheEntry {
            query_hash: hash.to_string(),
            query: query.to_string(),
            fetched_at: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            schema_version: SCHEMA_VERSION.to_string(),
            payload,
        };
        let tmp = self.dir.join(format!(".{hash}.{}.tmp", std::process::id()));
        let mut f = fs::File::create(&tmp).map_err(err)?;
        serde_json::to_writer(&mut f, &entry).map_err(|e| IngestError::Cache(e.to_string()))?;
        f.write_all(b"\n").and_then(|_| f.sync_all()).map_err(err)?;
        fs::rename(&tmp, self.path(hash)).map_err(err)?;
        Ok(entry)
    }
}
