//! Persistent Hodge table cache.
//!
//! One JSON file holding every table computed so far, keyed by `(g, n)`:
//!
//! ```json
//! {"schema": "taut.hodge-cache/1", "tables": [{"g": 1, "n": 1, "entries": [...]}]}
//! ```
//!
//! Writers take an exclusive lock on a sidecar `.lock` file and replace the
//! cache atomically through a rename.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HodgeTable;
use crate::error::{Error, Result};

pub const CACHE_SCHEMA: &str = "taut.hodge-cache/1";

/// Directory override for the cache file.
pub const CACHE_ENV: &str = "TAUT_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    schema: String,
    tables: Vec<CachedTable>,
}

#[derive(Serialize, Deserialize)]
struct CachedTable {
    g: u32,
    n: usize,
    entries: HodgeTable,
}

pub fn default_cache_path() -> PathBuf {
    let dir = std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("XDG_CACHE_HOME").map(|d| PathBuf::from(d).join("taut")))
        .or_else(|| std::env::var_os("HOME").map(|d| PathBuf::from(d).join(".cache").join("taut")))
        .unwrap_or_else(|| std::env::temp_dir().join("taut"));
    dir.join("hodge.json")
}

#[derive(Debug, Clone)]
pub struct HodgeCache {
    path: PathBuf,
    tables: BTreeMap<(u32, usize), HodgeTable>,
}

impl HodgeCache {
    /// Loads the cache at `path`; a missing file is an empty cache.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let tables = match fs::read_to_string(&path) {
            Ok(text) => parse(&text)?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => return Err(e.into()),
        };
        Ok(HodgeCache { path, tables })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, g: u32, n: usize) -> Option<&HodgeTable> {
        self.tables.get(&(g, n))
    }

    /// Records `table` and writes the file. Tables written concurrently by
    /// other processes since [`HodgeCache::open`] are merged in, not lost.
    pub fn store(&mut self, g: u32, n: usize, table: HodgeTable) -> Result<()> {
        if let Some(dir) = self.path.parent() {
            fs::create_dir_all(dir)?;
        }
        let lock_path = self.path.with_extension("json.lock");
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&lock_path)?;
        lock.lock()?;
        if let Ok(text) = fs::read_to_string(&self.path) {
            for (k, v) in parse(&text)? {
                self.tables.entry(k).or_insert(v);
            }
        }
        self.tables.insert((g, n), table);
        let file = CacheFile {
            schema: CACHE_SCHEMA.to_string(),
            tables: self
                .tables
                .iter()
                .map(|(&(g, n), t)| CachedTable {
                    g,
                    n,
                    entries: t.clone(),
                })
                .collect(),
        };
        let tmp = self
            .path
            .with_extension(format!("json.tmp{}", std::process::id()));
        {
            let mut f = File::create(&tmp)?;
            f.write_all(serde_json::to_string_pretty(&file)?.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &self.path)?;
        lock.unlock()?;
        Ok(())
    }
}

fn parse(text: &str) -> Result<BTreeMap<(u32, usize), HodgeTable>> {
    let file: CacheFile = serde_json::from_str(text)?;
    if file.schema != CACHE_SCHEMA {
        return Err(Error::Cache(format!(
            "unsupported schema {:?}, expected {CACHE_SCHEMA:?}",
            file.schema
        )));
    }
    Ok(file
        .tables
        .into_iter()
        .map(|t| ((t.g, t.n), t.entries))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elsv::auto_interpolate;

    #[test]
    fn store_and_reload() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join("hodge.json");
        let mut cache = HodgeCache::open(&path).unwrap();
        assert!(cache.get(1, 1).is_none());
        let t = auto_interpolate(1, 1, &[]).unwrap().table;
        cache.store(1, 1, t.clone()).unwrap();

        // a second writer that opened before the first stored keeps both
        let mut other = HodgeCache::open(dir.path().join("sub").join("hodge.json")).unwrap();
        let t03 = auto_interpolate(0, 3, &[]).unwrap().table;
        other.store(0, 3, t03.clone()).unwrap();

        let reloaded = HodgeCache::open(&path).unwrap();
        assert_eq!(reloaded.get(1, 1), Some(&t));
        assert_eq!(reloaded.get(0, 3), Some(&t03));
    }

    #[test]
    fn rejects_other_schema() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("hodge.json");
        fs::write(&path, r#"{"schema":"other/9","tables":[]}"#).unwrap();
        assert!(matches!(HodgeCache::open(&path), Err(Error::Cache(_))));
    }
}
