//! Persistent KL cache: a JSON file keyed by the hash of the group spec.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use schur_core::{CoxeterSystem, GroupElement, HeckeAlgebra, HeckeElement, LaurentPoly};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Header {
    format_version: u32,
    spec_hash: String,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    header: Header,
    entries: BTreeMap<String, String>,
}

/// Raised when an existing cache belongs to another group or format.
#[derive(Debug, thiserror::Error)]
#[error("cache file {path} does not match this run: {reason}")]
pub struct CacheMismatch {
    pub path: String,
    pub reason: String,
}

pub fn spec_hash(sys: &CoxeterSystem) -> String {
    let text = serde_json::to_string(sys.spec()).expect("specs always serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub struct KlCache {
    path: PathBuf,
    hash: String,
}

impl KlCache {
    pub fn new(path: impl Into<PathBuf>, sys: &CoxeterSystem) -> Self {
        KlCache { path: path.into(), hash: spec_hash(sys) }
    }

    /// Load entries into the algebra's KL table. Returns how many `h_w` were
    /// preloaded; a missing file loads nothing.
    pub fn load(&self, hecke: &HeckeAlgebra) -> Result<usize> {
        if !self.path.exists() {
            return Ok(0);
        }
        let text = fs::read_to_string(&self.path).with_context(|| format!("reading {}", self.path.display()))?;
        let file: CacheFile = serde_json::from_str(&text).map_err(|e| self.mismatch(format!("unreadable cache: {e}")))?;
        if file.header.format_version != FORMAT_VERSION {
            return Err(self.mismatch(format!("format version {} (expected {FORMAT_VERSION})", file.header.format_version)).into());
        }
        if file.header.spec_hash != self.hash {
            return Err(self.mismatch("it was written for a different Coxeter spec".into()).into());
        }
        let sys = hecke.system();
        let mut by_w: HashMap<GroupElement, HeckeElement> = HashMap::new();
        for (key, poly) in &file.entries {
            let (x, w) = parse_key(key).ok_or_else(|| self.mismatch(format!("bad entry key {key:?}")))?;
            let x = sys.parse_element(x).map_err(|e| self.mismatch(e.to_string()))?;
            let w = sys.parse_element(w).map_err(|e| self.mismatch(e.to_string()))?;
            let c = LaurentPoly::parse(poly).map_err(|e| self.mismatch(e.to_string()))?;
            by_w.entry(w).or_insert_with(HeckeElement::zero).add_term(x, &c);
        }
        let n = by_w.len();
        for (w, h) in by_w {
            if h.coeff(&w).is_one() {
                hecke.kl_table().insert(w, h);
            }
        }
        Ok(n)
    }

    /// Write every cached `h_w` back, replacing the file atomically.
    pub fn save(&self, hecke: &HeckeAlgebra) -> Result<()> {
        let sys = hecke.system();
        let mut entries = BTreeMap::new();
        for (w, h) in hecke.kl_table().snapshot() {
            for (x, c) in h.terms() {
                entries.insert(format!("({}, {})", sys.word_string(x), sys.word_string(&w)), c.to_string());
            }
        }
        let file = CacheFile { header: Header { format_version: FORMAT_VERSION, spec_hash: self.hash.clone() }, entries };
        let text = serde_json::to_string_pretty(&file)?;
        let tmp = tmp_path(&self.path);
        fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
        fs::rename(&tmp, &self.path).with_context(|| format!("renaming onto {}", self.path.display()))?;
        Ok(())
    }

    fn mismatch(&self, reason: String) -> CacheMismatch {
        CacheMismatch { path: self.path.display().to_string(), reason }
    }
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(format!(".tmp{}", std::process::id()));
    path.with_file_name(name)
}

fn parse_key(key: &str) -> Option<(&str, &str)> {
    let inner = key.strip_prefix('(')?.strip_suffix(')')?;
    let (x, w) = inner.split_once(',')?;
    Some((x.trim(), w.trim()))
}
