//! On-disk store for structure-constant tables.
//!
//! One canonical JSON file per `(m, n, mode)`. Writes go to a temporary file
//! in the same directory and are renamed into place, so concurrent writers
//! never expose a partial file. Validation of loaded tables happens in
//! [`Coalgebra::gamma`](crate::coalgebra::Coalgebra::gamma).

use std::fs;
use std::io::Write;
use std::marker::PhantomData;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::coalgebra::{GammaStore, GammaTable};
use crate::scalar::Scalar;

pub const DEFAULT_CACHE_DIR: &str = ".qsl2-cache";

pub fn cache_file_name(m: usize, n: usize, mode: &str) -> String {
    format!("gamma_m{m}_n{n}_{mode}.json")
}

/// Compact JSON with sorted keys and a trailing newline.
pub fn canonical_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    // routing through Value sorts object keys
    let v = serde_json::to_value(value)?;
    Ok(serde_json::to_string(&v)? + "\n")
}

pub struct DiskCache<S> {
    dir: Option<PathBuf>,
    warnings: Mutex<Vec<String>>,
    echo: bool,
    _scalar: PhantomData<fn() -> S>,
}

impl<S: Scalar> DiskCache<S> {
    /// Opens (creating if needed) the cache directory; falls back to memory only if that fails.
    pub fn open(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref().to_path_buf();
        let mut cache = DiskCache { dir: None, warnings: Mutex::default(), echo: true, _scalar: PhantomData };
        match fs::create_dir_all(&dir).and_then(|_| probe_writable(&dir)) {
            Ok(()) => cache.dir = Some(dir),
            Err(e) => cache.warn(format!("cache directory {} is not writable ({e}); using memory only", dir.display())),
        }
        cache
    }

    /// Keep warnings in memory instead of also printing them to stderr.
    pub fn quiet(mut self) -> Self {
        self.echo = false;
        self
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn path(&self, m: usize, n: usize) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(cache_file_name(m, n, S::MODE)))
    }

    pub fn warnings(&self) -> Vec<String> {
        self.warnings.lock().unwrap().clone()
    }

    fn warn(&self, msg: String) {
        if self.echo {
            eprintln!("warning: {msg}");
        }
        self.warnings.lock().unwrap().push(msg);
    }
}

fn probe_writable(dir: &Path) -> std::io::Result<()> {
    tempfile::NamedTempFile::new_in(dir).map(drop)
}

fn write_atomic(dir: &Path, target: &Path, contents: &str) -> std::io::Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(target).map_err(|e| e.error)?;
    Ok(())
}

impl<S: Scalar + Serialize + DeserializeOwned> GammaStore<S> for DiskCache<S> {
    fn load(&self, m: usize, n: usize) -> Option<GammaTable<S>> {
        let path = self.path(m, n)?;
        let text = fs::read_to_string(&path).ok()?;
        match serde_json::from_str(&text) {
            Ok(t) => Some(t),
            Err(e) => {
                self.warn(format!("unreadable cache entry {} ({e}); recomputing", path.display()));
                None
            }
        }
    }

    fn save(&self, table: &GammaTable<S>) {
        let (Some(dir), Some(path)) = (self.dir.as_ref(), self.path(table.m, table.n)) else {
            return;
        };
        let result = canonical_json(table)
            .map_err(std::io::Error::other)
            .and_then(|json| write_atomic(dir, &path, &json));
        if let Err(e) = result {
            self.warn(format!("could not write {} ({e})", path.display()));
        }
    }

    fn rejected(&self, m: usize, n: usize) {
        let name = cache_file_name(m, n, S::MODE);
        self.warn(format!("cache entry {name} failed validation; recomputing and overwriting"));
    }
}
