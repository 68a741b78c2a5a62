//! Content-addressed store of results on disk.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Serialize};
use sha2::{Digest, Sha256};

use super::bzv::{BzvRequest, BzvResult};
use crate::Result;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_VAR: &str = "BRZETA_CACHE_DIR";

/// A directory of `<sha256>.json` entries.
///
/// Entries are written to a temporary file and renamed into place, so readers
/// never see a partial entry.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

/// Key material of a request: anything that changes the result.
#[derive(Serialize)]
struct KeyMaterial<'a> {
    forest: String,
    lambda: i32,
    q: String,
    config: &'a super::bzv::EngineConfig,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `$BRZETA_CACHE_DIR` if set, else `fallback`.
    pub fn from_env_or(fallback: Option<PathBuf>) -> Option<Self> {
        std::env::var_os(CACHE_DIR_VAR).map(PathBuf::from).or(fallback).map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key_of<K: Serialize>(material: &K) -> Result<String> {
        let text = serde_json::to_string(material)?;
        Ok(hex::encode(Sha256::digest(text.as_bytes())))
    }

    pub fn request_key(req: &BzvRequest) -> Result<String> {
        Self::key_of(&KeyMaterial {
            forest: req.forest.to_string(),
            lambda: req.op.lambda(),
            q: req.q.to_json(),
            config: &req.config,
        })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>> {
        match fs::read_to_string(self.path(key)) {
            Ok(text) => Ok(Some(serde_json::from_str(&text)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    pub fn put<T: Serialize>(&self, key: &str, value: &T) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_string_pretty(value)?)?;
        fs::rename(&tmp, self.path(key))?;
        Ok(())
    }

    /// Keys of stored entries, sorted.
    pub fn list(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(e.into()),
        };
        for entry in entries {
            let name = entry?.file_name().to_string_lossy().into_owned();
            if let Some(key) = name.strip_suffix(".json") {
                if !key.starts_with('.') {
                    out.push(key.to_string());
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Removes every entry; returns how many there were.
    pub fn clear(&self) -> Result<usize> {
        let keys = self.list()?;
        for k in &keys {
            fs::remove_file(self.path(k))?;
        }
        Ok(keys.len())
    }

    /// The stored result for `req`, computing and storing it if absent.
    pub fn renormalised_bzv(&self, req: &BzvRequest) -> Result<BzvResult> {
        let key = Self::request_key(req)?;
        if let Some(hit) = self.get::<BzvResult>(&key)? {
            return Ok(hit);
        }
        let r = super::bzv::renormalised_bzv(req)?;
        self.put(&key, &r)?;
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{EsLetter, Tree};
    use crate::symbol::SumOperator;

    #[test]
    fn stores_and_clears() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("c"));
        assert!(cache.list().unwrap().is_empty());
        let req = BzvRequest::new(Tree::leaf(EsLetter::int(1, -3)).into(), SumOperator::Strict);
        let a = cache.renormalised_bzv(&req).unwrap();
        assert_eq!(cache.list().unwrap().len(), 1);
        let b = cache.renormalised_bzv(&req).unwrap();
        assert_eq!(a, b);
        let mut other = req.clone();
        other.op = SumOperator::Weak;
        assert_ne!(Cache::request_key(&req).unwrap(), Cache::request_key(&other).unwrap());
        assert_eq!(cache.clear().unwrap(), 1);
        assert!(cache.list().unwrap().is_empty());
    }
}
