//! Content-addressed on-disk cache of computed slices.
//!
//! Files are named `<hash>-<mode>-<arity>.opideal` and hold
//!
//! ```text
//! OPIDEAL v1
//! arity=<n> dim=<d> order=lex mode=<unital|nonunital>
//! <one dense row of n! rationals per basis vector, in RREF order>
//! ```
//!
//! Deleting any file is always safe; unreadable files are treated as misses.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::warn;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{RowBasis, SparseVector};
use crate::operad::Mode;
use crate::perm::factorial;
use crate::scalar::{parse_rational, Rational, Scalar};

use super::{GeneratorSet, IdealSlice};

const MAGIC: &str = "OPIDEAL v1";
const EXTENSION: &str = "opideal";

/// SHA-256 over the sorted canonical generator texts, one per line, in hex.
pub fn generator_hash<S: Scalar>(g: &GeneratorSet<S>) -> String {
    content_hash("generators", &g.canonical_texts())
}

/// SHA-256 of a kind tag followed by lines of content.
pub fn content_hash(kind: &str, lines: &[String]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(kind.as_bytes());
    hasher.update(b"\n");
    for line in lines {
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}

pub fn write_slice(slice: &IdealSlice<Rational>, mode: Mode) -> String {
    let mut out = format!(
        "{MAGIC}\narity={} dim={} order=lex mode={}\n",
        slice.arity(),
        slice.dim(),
        mode
    );
    for row in slice.basis().rows() {
        let line: Vec<String> = row
            .to_dense()
            .iter()
            .map(|x| format!("{}/{}", x.numer(), x.denom()))
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_slice(text: &str) -> Result<(Mode, IdealSlice<Rational>)> {
    let bad = |m: &str| Error::CacheFormat(m.to_string());
    let mut lines = text.lines();
    if lines.next() != Some(MAGIC) {
        return Err(bad("missing header"));
    }
    let meta = lines.next().ok_or_else(|| bad("missing metadata line"))?;
    let mut arity = None;
    let mut dim = None;
    let mut mode = None;
    let mut order = None;
    for field in meta.split_whitespace() {
        let (key, value) = field.split_once('=').ok_or_else(|| bad("malformed metadata"))?;
        match key {
            "arity" => arity = value.parse::<usize>().ok(),
            "dim" => dim = value.parse::<usize>().ok(),
            "mode" => mode = value.parse::<Mode>().ok(),
            "order" => order = Some(value),
            _ => return Err(bad("unknown metadata field")),
        }
    }
    let (Some(arity), Some(dim), Some(mode), Some("lex")) = (arity, dim, mode, order) else {
        return Err(bad("incomplete metadata"));
    };
    if arity > 12 {
        return Err(bad("arity too large"));
    }
    let width = factorial(arity);
    let mut basis = RowBasis::new(width);
    let mut count = 0;
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let values = line
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()
            .map_err(|_| bad("unreadable coefficient"))?;
        if values.len() != width {
            return Err(bad("row of the wrong length"));
        }
        let row = SparseVector::from_dense(values);
        if row.is_zero() {
            return Err(bad("zero row"));
        }
        basis.insert(&row)?;
        count += 1;
    }
    if count != dim || basis.rank() != dim {
        return Err(bad("row count disagrees with dim"));
    }
    let slice = IdealSlice::new(arity, basis)?;
    // Rows in the file must already be the canonical basis.
    if write_slice(&slice, mode) != normalise(text) {
        return Err(bad("rows are not in canonical form"));
    }
    Ok((mode, slice))
}

fn normalise(text: &str) -> String {
    let mut out = String::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// One cache file as reported by [`SliceCache::list`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CacheEntry {
    pub file: String,
    pub hash: String,
    pub mode: String,
    pub arity: usize,
    pub dim: Option<usize>,
    pub valid: bool,
    pub bytes: u64,
}

pub struct SliceCache {
    dir: PathBuf,
}

impl SliceCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        SliceCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, hash: &str, mode: Mode, arity: usize) -> PathBuf {
        self.dir.join(format!("{hash}-{mode}-{arity}.{EXTENSION}"))
    }

    /// The cached slice, or `None` on a miss or an unreadable file.
    pub fn load(&self, hash: &str, mode: Mode, arity: usize) -> Option<IdealSlice<Rational>> {
        let path = self.path(hash, mode, arity);
        let text = fs::read_to_string(&path).ok()?;
        match read_slice(&text) {
            Ok((m, slice)) if m == mode && slice.arity() == arity => Some(slice),
            Ok(_) => {
                warn!("ignoring cache file {} with mismatched metadata", path.display());
                None
            }
            Err(e) => {
                warn!("ignoring corrupt cache file {}: {e}", path.display());
                None
            }
        }
    }

    /// Writes through a temporary file and an atomic rename.
    pub fn store(&self, hash: &str, mode: Mode, slice: &IdealSlice<Rational>) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(write_slice(slice, mode).as_bytes())?;
        tmp.flush()?;
        tmp.persist(self.path(hash, mode, slice.arity())).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }

    pub fn list(&self) -> Result<Vec<CacheEntry>> {
        let mut entries = Vec::new();
        if !self.dir.exists() {
            return Ok(entries);
        }
        for item in fs::read_dir(&self.dir)? {
            let item = item?;
            let file = item.file_name().to_string_lossy().into_owned();
            let Some((hash, mode, arity)) = parse_file_name(&file) else {
                continue;
            };
            let bytes = item.metadata()?.len();
            let parsed = fs::read_to_string(item.path()).ok().and_then(|t| read_slice(&t).ok());
            let valid = parsed
                .as_ref()
                .is_some_and(|(m, s)| m.as_str() == mode && s.arity() == arity);
            entries.push(CacheEntry {
                file,
                hash,
                mode,
                arity,
                dim: parsed.map(|(_, s)| s.dim()),
                valid,
                bytes,
            });
        }
        entries.sort_by(|a, b| a.file.cmp(&b.file));
        Ok(entries)
    }

    /// Removes invalid entries and stray temporaries, or every cache file with `all`.
    /// Returns the removed file names.
    pub fn gc(&self, all: bool) -> Result<Vec<String>> {
        let mut removed = Vec::new();
        if !self.dir.exists() {
            return Ok(removed);
        }
        let valid: Vec<String> =
            self.list()?.into_iter().filter(|e| e.valid).map(|e| e.file).collect();
        let mut names: Vec<String> = fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok())
            .filter(|e| e.path().is_file())
            .map(|e| e.file_name().to_string_lossy().into_owned())
            .collect();
        names.sort();
        for name in names {
            let ours = parse_file_name(&name).is_some() || name.starts_with(".tmp");
            if ours && (all || !valid.contains(&name)) {
                fs::remove_file(self.dir.join(&name))?;
                removed.push(name);
            }
        }
        Ok(removed)
    }
}

fn parse_file_name(name: &str) -> Option<(String, String, usize)> {
    let stem = name.strip_suffix(&format!(".{EXTENSION}"))?;
    let mut parts = stem.rsplitn(3, '-');
    let arity = parts.next()?.parse().ok()?;
    let mode = parts.next()?;
    let hash = parts.next()?;
    if mode.parse::<Mode>().is_err() || hash.is_empty() {
        return None;
    }
    Some((hash.to_string(), mode.to_string(), arity))
}
