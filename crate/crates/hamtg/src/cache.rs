//! Per-order memo of lifted bases, optionally persisted as `basis-<n>.json`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use hamtg_core::liftbasis::{base_basis, lift_basis, DEFAULT_MAX_ORDER};
use hamtg_core::timegraph::Permutation;
use hamtg_core::Error as CoreError;

use crate::error::{HarnessError, Result};
use crate::formats::BasisFile;

/// Environment variable naming the on-disk cache directory.
pub const CACHE_DIR_ENV: &str = "HAMTG_CACHE_DIR";

#[derive(Debug)]
pub struct BasisCache {
    dir: Option<PathBuf>,
    max_order: usize,
    memory: BTreeMap<usize, Vec<Permutation>>,
}

impl Default for BasisCache {
    fn default() -> Self {
        Self::in_memory(DEFAULT_MAX_ORDER)
    }
}

impl BasisCache {
    pub fn in_memory(max_order: usize) -> Self {
        Self {
            dir: None,
            max_order,
            memory: BTreeMap::new(),
        }
    }

    pub fn with_dir(dir: impl Into<PathBuf>, max_order: usize) -> Self {
        Self {
            dir: Some(dir.into()),
            ..Self::in_memory(max_order)
        }
    }

    /// Uses `dir` if given, else the directory in [`CACHE_DIR_ENV`], else
    /// memory only.
    pub fn from_env(dir: Option<PathBuf>, max_order: usize) -> Self {
        match dir.or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from)) {
            Some(d) => Self::with_dir(d, max_order),
            None => Self::in_memory(max_order),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    fn path_for(&self, n: usize) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("basis-{n}.json")))
    }

    fn load(&self, n: usize) -> Result<Option<Vec<Permutation>>> {
        let Some(path) = self.path_for(n) else {
            return Ok(None);
        };
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(HarnessError::io(path, e)),
        };
        let file: BasisFile = serde_json::from_str(&text)?;
        if file.n != n {
            return Err(HarnessError::Format(format!(
                "{} holds a basis of order {}",
                path.display(),
                file.n
            )));
        }
        file.decode().map(Some)
    }

    fn store(&self, n: usize, perms: &[Permutation]) -> Result<()> {
        let Some(path) = self.path_for(n) else {
            return Ok(());
        };
        let dir = path.parent().expect("cache file has a parent");
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        let json = serde_json::to_string(&BasisFile::new(n, perms))?;
        fs::write(&path, json + "\n").map_err(|e| HarnessError::io(path, e))
    }

    /// Basis of `H_P^n` from the lifted construction, reusing any cached
    /// lower order.
    pub fn get(&mut self, n: usize) -> Result<&[Permutation]> {
        if n > self.max_order {
            return Err(CoreError::ScaleExceeded {
                n,
                cap: self.max_order,
            }
            .into());
        }
        if !self.memory.contains_key(&n) {
            let perms = match self.load(n)? {
                Some(p) => p,
                None => {
                    let built = if n <= 3 {
                        base_basis(n)?
                    } else {
                        let previous = self.get(n - 1)?.to_vec();
                        lift_basis(&previous, n)?
                    };
                    self.store(n, &built)?;
                    built
                }
            };
            self.memory.insert(n, perms);
        }
        Ok(&self.memory[&n])
    }
}
