//! On-disk cache of structure-constant tables keyed by a content hash.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ddca_core::interp::{StructureConstantTable, StructureConstants, TableJson, TABLE_FORMAT_VERSION};
use ddca_core::spherical::TIndex;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub struct TableCache {
    dir: PathBuf,
}

#[derive(Debug)]
pub enum Lookup {
    Hit(StructureConstantTable),
    Miss,
    /// The entry failed to parse or to verify and has been evicted.
    Corrupt(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Cache,
    Computed,
    /// A corrupt entry was evicted and the table recomputed.
    Recomputed,
}

pub fn table_key(r: usize, m1: &TIndex, m2: &TIndex) -> String {
    let canonical = format!("ddca-table|v{TABLE_FORMAT_VERSION}|r={r}|m1={m1}|m2={m2}");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

pub fn table_bytes(table: &StructureConstantTable) -> Vec<u8> {
    let mut v = serde_json::to_vec(&table.to_json()).expect("tables serialize");
    v.push(b'\n');
    v
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self, CliError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| CliError::Cache(format!("{}: {e}", dir.display())))?;
        Ok(TableCache { dir })
    }

    pub fn path(&self, r: usize, m1: &TIndex, m2: &TIndex) -> PathBuf {
        self.dir.join(format!("{}.json", table_key(r, m1, m2)))
    }

    pub fn store(&self, table: &StructureConstantTable) -> Result<PathBuf, CliError> {
        let path = self.path(table.r, &table.m1, &table.m2);
        write_atomic(&path, &table_bytes(table))?;
        Ok(path)
    }

    /// Reads an entry and re-derives one specialization before trusting it.
    pub fn lookup(&self, sc: &StructureConstants, m1: &TIndex, m2: &TIndex) -> Result<Lookup, CliError> {
        let path = self.path(sc.r(), m1, m2);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Lookup::Miss),
            Err(e) => return Err(e.into()),
        };
        match self.check(sc, m1, m2, &bytes) {
            Ok(table) => Ok(Lookup::Hit(table)),
            Err(reason) => {
                fs::remove_file(&path)?;
                Ok(Lookup::Corrupt(reason))
            }
        }
    }

    fn check(&self, sc: &StructureConstants, m1: &TIndex, m2: &TIndex, bytes: &[u8]) -> Result<StructureConstantTable, String> {
        let json: TableJson = serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
        let table = StructureConstantTable::from_json(json).map_err(|e| e.to_string())?;
        if table.r != sc.r() || &table.m1 != m1 || &table.m2 != m2 {
            return Err("entry does not match its key".into());
        }
        if table.fit != StructureConstants::fit_ranks(m1, m2) {
            return Err("unexpected fit metadata".into());
        }
        // the rank is drawn from the key so repeated lookups stay reproducible
        let key = table_key(sc.r(), m1, m2);
        let ranks = &table.fit.sample_ranks;
        let pick = usize::from_str_radix(&key[..8], 16).expect("hex key") % ranks.len();
        sc.validate_at_rank(&table, ranks[pick]).map_err(|e| e.to_string())?;
        Ok(table)
    }

    pub fn get_or_compute(
        &self,
        sc: &StructureConstants,
        m1: &TIndex,
        m2: &TIndex,
    ) -> Result<(StructureConstantTable, Source), CliError> {
        let source = match self.lookup(sc, m1, m2)? {
            Lookup::Hit(t) => return Ok((t, Source::Cache)),
            Lookup::Miss => Source::Computed,
            Lookup::Corrupt(reason) => {
                eprintln!("warning: evicted corrupt cache entry for {m1}·{m2}: {reason}");
                Source::Recomputed
            }
        };
        let table = (*sc.table(m1, m2)?).clone();
        self.store(&table)?;
        Ok((table, source))
    }
}
