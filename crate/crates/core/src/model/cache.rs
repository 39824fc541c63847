use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::enumerate::count_points;
use super::ModelSpec;

const HEADER: &str = "# point-count cache v1: model-hash q smooth-only count";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CacheKey {
    pub model_hash: String,
    pub q: u64,
    pub smooth_only: bool,
}

/// Exact point counts persisted as text, one record per line.
/// Single writer, many readers: writes go through a rename.
#[derive(Clone, Debug)]
pub struct PointCountCache {
    path: PathBuf,
}

impl PointCountCache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        PointCountCache { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// All records; a missing file is an empty cache.
    pub fn entries(&self) -> Result<BTreeMap<CacheKey, u128>> {
        let text = match fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || Error::Cache(format!("{}:{}: malformed record '{line}'", self.path.display(), lineno + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [hash, q, smooth, count] = fields[..] else {
                return Err(bad());
            };
            if hash.len() != 64 || !hash.bytes().all(|b| b.is_ascii_hexdigit()) {
                return Err(bad());
            }
            let smooth_only = match smooth {
                "0" => false,
                "1" => true,
                _ => return Err(bad()),
            };
            let key = CacheKey { model_hash: hash.to_string(), q: q.parse().map_err(|_| bad())?, smooth_only };
            out.insert(key, count.parse().map_err(|_| bad())?);
        }
        Ok(out)
    }

    pub fn get(&self, key: &CacheKey) -> Result<Option<u128>> {
        Ok(self.entries()?.get(key).copied())
    }

    /// Inserts or replaces a record. A corrupt file is rewritten from scratch.
    pub fn put(&self, key: CacheKey, count: u128) -> Result<()> {
        let mut entries = self.entries().unwrap_or_default();
        entries.insert(key, count);
        self.write_all(&entries)
    }

    pub fn clear(&self) -> Result<()> {
        match fs::remove_file(&self.path) {
            Err(e) if e.kind() != std::io::ErrorKind::NotFound => Err(e.into()),
            _ => Ok(()),
        }
    }

    fn write_all(&self, entries: &BTreeMap<CacheKey, u128>) -> Result<()> {
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let tmp = self.path.with_extension("tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            writeln!(f, "{HEADER}")?;
            for (k, c) in entries {
                writeln!(f, "{} {} {} {}", k.model_hash, k.q, u8::from(k.smooth_only), c)?;
            }
            f.sync_all()?;
        }
        fs::rename(&tmp, &self.path)?;
        Ok(())
    }
}

/// Point count through the cache. Returns the count and whether it was a hit.
/// A corrupt cache triggers recomputation and a rewrite.
pub fn count_points_cached(
    model: &ModelSpec,
    k: u32,
    smooth_only: bool,
    cache: &PointCountCache,
) -> Result<(u128, bool)> {
    let q = model.prime().checked_pow(k).ok_or_else(|| Error::Domain("field order overflows".into()))?;
    let key = CacheKey { model_hash: model.hash_hex(), q, smooth_only };
    if let Ok(Some(c)) = cache.get(&key) {
        return Ok((c, true));
    }
    let count = count_points(model, k, smooth_only)?;
    cache.put(key, count)?;
    Ok((count, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::testing::quartic;

    #[test]
    fn put_get_and_keys() {
        let dir = tempfile::tempdir().unwrap();
        let cache = PointCountCache::new(dir.path().join("counts.txt"));
        let h = "ab".repeat(32);
        let k1 = CacheKey { model_hash: h.clone(), q: 17, smooth_only: true };
        let k2 = CacheKey { model_hash: h, q: 17, smooth_only: false };
        cache.put(k1.clone(), 204).unwrap();
        assert_eq!(cache.get(&k1).unwrap(), Some(204));
        assert_eq!(cache.get(&k2).unwrap(), None);
        cache.put(k2.clone(), 205).unwrap();
        assert_eq!(cache.get(&k1).unwrap(), Some(204));
        assert_eq!(cache.get(&k2).unwrap(), Some(205));
    }

    #[test]
    fn cold_start_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = PointCountCache::new(dir.path().join("c.txt"));
        let m = quartic();
        assert_eq!(count_points_cached(&m, 1, false, &cache).unwrap(), (205, false));
        assert_eq!(count_points_cached(&m, 1, false, &cache).unwrap(), (205, true));
        fs::write(cache.path(), "garbage line\n").unwrap();
        assert!(matches!(cache.entries(), Err(Error::Cache(_))));
        assert_eq!(count_points_cached(&m, 1, true, &cache).unwrap(), (204, false));
        assert_eq!(cache.entries().unwrap().len(), 1);
    }
}
