//! File-backed count cache.
//!
//! The cache is one JSON document `{"version": 1, "entries": {key: count}}`.
//! An open [`CountCache`] holds an exclusive lock on `<path>.lock` until it is
//! dropped, so concurrent invocations sharing a cache run one after another.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use cycpat::{ClassQuery, Convention};

const CACHE_VERSION: u32 = 1;

#[derive(Deserialize)]
struct CacheDocument {
    version: u32,
    entries: BTreeMap<String, u64>,
}

pub struct CountCache {
    path: PathBuf,
    entries: BTreeMap<String, u64>,
    dirty: bool,
    _lock: File,
}

pub fn cache_key(query: &ClassQuery, convention: Convention) -> cycpat::Result<String> {
    Ok(format!("{};convention={convention}", query.canonical_key()?))
}

fn lock_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".lock");
    PathBuf::from(name)
}

impl CountCache {
    /// Opens (or starts) the cache at `path`, blocking until the lock is free.
    pub fn open(path: &Path) -> io::Result<Self> {
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(lock_path(path))?;
        lock.lock()?;
        let entries = match fs::read_to_string(path) {
            Ok(text) => {
                let doc: CacheDocument = serde_json::from_str(&text)
                    .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
                if doc.version != CACHE_VERSION {
                    return Err(io::Error::new(
                        io::ErrorKind::InvalidData,
                        format!("unsupported cache version {}", doc.version),
                    ));
                }
                doc.entries
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => return Err(e),
        };
        Ok(Self {
            path: path.to_path_buf(),
            entries,
            dirty: false,
            _lock: lock,
        })
    }

    pub fn get(&self, key: &str) -> Option<u64> {
        self.entries.get(key).copied()
    }

    pub fn insert(&mut self, key: String, count: u64) {
        if self.entries.insert(key, count) != Some(count) {
            self.dirty = true;
        }
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Writes the document if anything changed, replacing the file atomically.
    pub fn save(&mut self) -> io::Result<()> {
        if !self.dirty {
            return Ok(());
        }
        let doc = serde_json::json!({ "version": CACHE_VERSION, "entries": &self.entries });
        let text = serde_json::to_string_pretty(&doc).map_err(io::Error::other)?;
        let mut tmp = self.path.as_os_str().to_owned();
        tmp.push(".tmp");
        fs::write(&tmp, text + "\n")?;
        fs::rename(&tmp, &self.path)?;
        self.dirty = false;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn persists_between_opens() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("counts.json");
        let key = cache_key(&ClassQuery::pell_pair(4), Convention::Paper).unwrap();
        {
            let mut cache = CountCache::open(&path).unwrap();
            assert_eq!(cache.get(&key), None);
            cache.insert(key.clone(), 5);
            cache.save().unwrap();
        }
        let cache = CountCache::open(&path).unwrap();
        assert_eq!(cache.get(&key), Some(5));
        assert_eq!(cache.len(), 1);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.contains("\"version\": 1"));
    }

    #[test]
    fn key_includes_convention() {
        let q = ClassQuery::pell_pair(1);
        assert_ne!(
            cache_key(&q, Convention::Paper).unwrap(),
            cache_key(&q, Convention::Structural).unwrap()
        );
        assert_eq!(
            cache_key(&q, Convention::Paper).unwrap(),
            "n=1;sigma=2,4,3,1;tau=1,3,2,4;mode=all-cycles;anchors=;convention=paper"
        );
    }

    #[test]
    fn rejects_unknown_version() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("counts.json");
        fs::write(&path, r#"{"version": 2, "entries": {}}"#).unwrap();
        assert!(CountCache::open(&path).is_err());
    }
}
