//! Best-effort JSON file cache for computed values.
//!
//! Entries are keyed by a content hash of the crate version and the canonical
//! query string; the query string is stored inside the entry and re-validated
//! on read, so hash collisions and corrupt or truncated files degrade to
//! cache misses. Writes go through a temporary file followed by a rename, so
//! concurrent runs never observe partial entries.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// Opens (creating if needed) a cache directory; `None` disables caching.
    pub fn open(dir: Option<PathBuf>) -> Option<Cache> {
        let dir = dir?;
        fs::create_dir_all(&dir).ok()?;
        Some(Cache { dir })
    }

    fn path(&self, query: &str) -> PathBuf {
        let mut hasher = Sha256::new();
        hasher.update(env!("CARGO_PKG_VERSION").as_bytes());
        hasher.update(b"\0");
        hasher.update(query.as_bytes());
        let digest = hasher.finalize();
        let hex: String = digest.iter().take(16).map(|b| format!("{b:02x}")).collect();
        self.dir.join(format!("{hex}.json"))
    }

    /// Returns the cached value for the query, or `None` on miss/corruption.
    pub fn get(&self, query: &str) -> Option<String> {
        let raw = fs::read_to_string(self.path(query)).ok()?;
        let v: Value = serde_json::from_str(&raw).ok()?;
        if v["version"].as_str() != Some(env!("CARGO_PKG_VERSION"))
            || v["query"].as_str() != Some(query)
        {
            return None;
        }
        v["value"].as_str().map(str::to_owned)
    }

    pub fn put(&self, query: &str, value: &str) {
        let entry = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "query": query,
            "value": value,
        });
        let path = self.path(query);
        let tmp = path.with_extension("tmp");
        if fs::write(&tmp, entry.to_string()).is_ok() {
            let _ = fs::rename(&tmp, &path);
        }
    }

    #[cfg(test)]
    pub fn entry_path(&self, query: &str) -> PathBuf {
        self.path(query)
    }
}

/// Resolves the cache directory from the flag or `HURWITZ_CACHE_DIR`.
pub fn resolve_dir(flag: Option<&Path>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf)
        .or_else(|| std::env::var_os("HURWITZ_CACHE_DIR").map(PathBuf::from))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = std::env::temp_dir().join(format!("hurwitz-cache-test-{}", std::process::id()));
        let cache = Cache::open(Some(dir.clone())).unwrap();
        assert_eq!(cache.get("q1"), None);
        cache.put("q1", "41/6");
        assert_eq!(cache.get("q1").as_deref(), Some("41/6"));
        // corruption is detected and treated as a miss
        fs::write(cache.entry_path("q1"), "{ not json").unwrap();
        assert_eq!(cache.get("q1"), None);
        // a different query never reads another entry
        assert_eq!(cache.get("q2"), None);
        let _ = fs::remove_dir_all(dir);
    }
}
