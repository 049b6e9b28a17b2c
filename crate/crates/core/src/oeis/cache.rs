use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "SEQFAM_CACHE_DIR";

/// `$SEQFAM_CACHE_DIR`, else the platform cache dir plus `seqfam`.
pub fn default_dir() -> PathBuf {
    match std::env::var_os(CACHE_ENV) {
        Some(d) if !d.is_empty() => PathBuf::from(d),
        _ => dirs::cache_dir().unwrap_or_else(std::env::temp_dir).join("seqfam"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub(crate) struct SearchRecord {
    #[serde(with = "super::decimal_vec")]
    pub terms: Vec<BigInt>,
    pub ids: Vec<String>,
}

/// Write-once records on disk. Reads never lock; writes go through a temp
/// file in the same directory and are renamed into place without clobbering.
#[derive(Debug, Clone)]
pub struct Cache {
    root: PathBuf,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn search_path(&self, terms: &[BigInt]) -> PathBuf {
        let key = terms.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        let digest = Sha256::digest(key.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.root.join("search").join(format!("{hex}.jsonl"))
    }

    fn bfile_path(&self, id: &str) -> PathBuf {
        self.root.join("bfile").join(format!("b{}.txt", &id[1..]))
    }

    pub(crate) fn get_search(&self, terms: &[BigInt]) -> Result<Option<SearchRecord>> {
        let path = self.search_path(terms);
        let Some(text) = read_optional(&path)? else {
            return Ok(None);
        };
        let rec: SearchRecord = serde_json::from_str(text.trim()).map_err(|e| Error::Cache {
            path: path.clone(),
            source: io::Error::new(io::ErrorKind::InvalidData, e),
        })?;
        // A hash collision would show up as a different key.
        Ok((rec.terms == terms).then_some(rec))
    }

    pub(crate) fn put_search(&self, rec: &SearchRecord) -> Result<()> {
        let mut line = serde_json::to_string(rec).expect("record serializes");
        line.push('\n');
        write_once(&self.search_path(&rec.terms), line.as_bytes())
    }

    pub(crate) fn get_bfile(&self, id: &str) -> Result<Option<String>> {
        read_optional(&self.bfile_path(id))
    }

    pub(crate) fn put_bfile(&self, id: &str, raw: &str) -> Result<()> {
        write_once(&self.bfile_path(id), raw.as_bytes())
    }
}

fn read_optional(path: &Path) -> Result<Option<String>> {
    match fs::read_to_string(path) {
        Ok(s) => Ok(Some(s)),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
        Err(source) => Err(Error::Cache {
            path: path.to_owned(),
            source,
        }),
    }
}

fn write_once(path: &Path, bytes: &[u8]) -> Result<()> {
    let cache_err = |source| Error::Cache {
        path: path.to_owned(),
        source,
    };
    let dir = path.parent().expect("cache paths have a parent");
    fs::create_dir_all(dir).map_err(cache_err)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(cache_err)?;
    tmp.write_all(bytes).map_err(cache_err)?;
    tmp.as_file().sync_all().map_err(cache_err)?;
    match tmp.persist_noclobber(path) {
        Ok(_) => Ok(()),
        // Someone else wrote it first; the existing record stands.
        Err(e) if e.error.kind() == io::ErrorKind::AlreadyExists => Ok(()),
        Err(e) => Err(cache_err(e.error)),
    }
}
