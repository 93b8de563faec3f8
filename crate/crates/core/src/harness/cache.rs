//! Per-run store of presentations, relation lattices and place tables, with
//! an optional on-disk cache in the text formats of `cyclo` and `modsym`.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use crate::cyclo::text::{lattice_from_text, lattice_to_text, places_from_text, places_to_text};
use crate::cyclo::{PlaceTable, RelationLattice};
use crate::error::Result;
use crate::k2model::{PresentedK2, TameContext, Varpi};
use crate::modsym::{CuspSelector, HomologyPresentation, PresentationCache, PresentationRecord};

pub const CACHE_ENV: &str = "K2MODSYM_CACHE_DIR";

#[derive(Default)]
pub struct Workspace {
    cache_dir: Option<PathBuf>,
    presentations: PresentationCache,
    models: Mutex<HashMap<u64, Arc<PresentedK2>>>,
    contexts: Mutex<HashMap<(u64, Vec<u64>), Arc<TameContext>>>,
}

impl Workspace {
    pub fn new(cache_dir: Option<PathBuf>) -> Self {
        Workspace { cache_dir, ..Default::default() }
    }

    /// Uses `dir` if given, else the directory named by `K2MODSYM_CACHE_DIR`.
    pub fn from_env(dir: Option<PathBuf>) -> Self {
        Self::new(dir.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from)))
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    /// The presentation at `level`; on first use its record is written to the
    /// cache, and an existing record is checked against it.
    pub fn presentation(&self, level: u64) -> Result<Arc<HomologyPresentation>> {
        let pres = self.presentations.get(level)?;
        if let Some(path) = self.path(&format!("presentation-{level}.txt")) {
            let fresh = || PresentationRecord::new(&pres, CuspSelector::All).map(|r| r.to_text());
            match fs::read_to_string(&path) {
                Ok(text) => {
                    let ok = PresentationRecord::from_text(&text).map(|r| r.matches(&pres)).unwrap_or(false);
                    if !ok {
                        write_atomic(&path, &fresh()?)?;
                    }
                }
                Err(_) => write_atomic(&path, &fresh()?)?,
            }
        }
        Ok(pres)
    }

    pub fn varpi(&self, level: u64) -> Result<Varpi> {
        Varpi::new(self.presentation(level)?)
    }

    pub fn presented(&self, level: u64) -> Result<Arc<PresentedK2>> {
        if let Some(m) = self.models.lock().unwrap().get(&level) {
            return Ok(m.clone());
        }
        let lattice = match self.path(&format!("lattice-{level}.txt")) {
            Some(path) => match fs::read_to_string(&path).ok().and_then(|t| lattice_from_text(&t).ok()) {
                Some(lat) if lat.level() == level => lat,
                _ => {
                    let lat = RelationLattice::build(level)?;
                    write_atomic(&path, &lattice_to_text(&lat))?;
                    lat
                }
            },
            None => RelationLattice::build(level)?,
        };
        let model = Arc::new(PresentedK2::from_lattice(lattice)?);
        Ok(self.models.lock().unwrap().entry(level).or_insert(model).clone())
    }

    /// Places over the primes dividing `level` and over `extra`.
    pub fn tame(&self, level: u64, extra: &[u64]) -> Result<Arc<TameContext>> {
        let key = (level, extra.to_vec());
        if let Some(c) = self.contexts.lock().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let name = if extra.is_empty() {
            format!("places-{level}.txt")
        } else {
            let e: Vec<String> = extra.iter().map(|x| x.to_string()).collect();
            format!("places-{level}-{}.txt", e.join("-"))
        };
        let table = match self.path(&name) {
            Some(path) => match fs::read_to_string(&path).ok().and_then(|t| places_from_text(&t).ok()) {
                Some(t) if t.level() == level => t,
                _ => {
                    let t = PlaceTable::with_extra_primes(level, extra)?;
                    write_atomic(&path, &places_to_text(&t))?;
                    t
                }
            },
            None => PlaceTable::with_extra_primes(level, extra)?,
        };
        let ctx = Arc::new(TameContext::from_table(table)?);
        Ok(self.contexts.lock().unwrap().entry(key).or_insert(ctx).clone())
    }

    fn path(&self, name: &str) -> Option<PathBuf> {
        self.cache_dir.as_ref().map(|d| d.join(name))
    }
}

/// Writes through a temporary file and a rename, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_files_are_written_and_reused() {
        let dir = tempfile::tempdir().unwrap();
        let ws = Workspace::new(Some(dir.path().to_path_buf()));
        ws.presentation(7).unwrap();
        let model = ws.presented(7).unwrap();
        ws.tame(7, &[2]).unwrap();
        for f in ["presentation-7.txt", "lattice-7.txt", "places-7-2.txt"] {
            assert!(dir.path().join(f).exists(), "{f}");
        }
        let again = Workspace::new(Some(dir.path().to_path_buf()));
        assert_eq!(again.presented(7).unwrap().invariants_inverting_two(), model.invariants_inverting_two());
        assert_eq!(again.tame(7, &[2]).unwrap().places().len(), ws.tame(7, &[2]).unwrap().places().len());
    }

    #[test]
    fn corrupt_cache_is_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("lattice-5.txt"), "garbage").unwrap();
        let ws = Workspace::new(Some(dir.path().to_path_buf()));
        ws.presented(5).unwrap();
        let text = fs::read_to_string(dir.path().join("lattice-5.txt")).unwrap();
        assert!(text.starts_with("relation-lattice 1"));
    }
}
