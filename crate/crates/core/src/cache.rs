//! Persistent distribution cache: one JSON object per line,
//! `{"version":1,"pattern":"12:01","n":3,"counts":[...]}`.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::distribution::DistributionTable;
use crate::error::Error;
use crate::pattern::MeshPattern;

pub const FORMAT_VERSION: u32 = 1;
pub const CACHE_DIR_ENV: &str = "MESHDIST_CACHE_DIR";
const FILE_NAME: &str = "distributions.jsonl";

#[derive(Serialize, Deserialize)]
struct Line {
    version: u32,
    pattern: String,
    n: usize,
    counts: Vec<u64>,
}

pub struct Cache {
    dir: PathBuf,
    writer: Mutex<()>,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into(), writer: Mutex::new(()) }
    }

    /// Directory from `MESHDIST_CACHE_DIR`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV).map(Cache::new)
    }

    pub fn path(&self) -> PathBuf {
        self.dir.join(FILE_NAME)
    }

    fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
        move |source| Error::CacheIo { path: path.to_path_buf(), source }
    }

    /// Appends every row of `t`.
    pub fn put(&self, t: &DistributionTable) -> Result<(), Error> {
        let _guard = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        fs::create_dir_all(&self.dir).map_err(Self::io(&self.dir))?;
        let path = self.path();
        let mut f = OpenOptions::new().create(true).append(true).open(&path).map_err(Self::io(&path))?;
        let pattern = t.pattern.to_string();
        let mut buf = String::new();
        for (n, row) in t.rows.iter().enumerate() {
            let line = Line { version: FORMAT_VERSION, pattern: pattern.clone(), n, counts: row.clone() };
            buf.push_str(&serde_json::to_string(&line).expect("plain data serializes"));
            buf.push('\n');
        }
        f.write_all(buf.as_bytes()).map_err(Self::io(&path))
    }

    /// The table of `p` up to `depth`, if every row is cached under the current
    /// format version. Lines of other versions are ignored, forcing a recompute.
    pub fn get(&self, p: &MeshPattern, depth: usize) -> Result<Option<DistributionTable>, Error> {
        let path = self.path();
        let f = match fs::File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::CacheIo { path, source: e }),
        };
        let literal = p.to_string();
        let mut rows: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for (no, line) in BufReader::new(f).lines().enumerate() {
            let line = line.map_err(Self::io(&path))?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed: Line = serde_json::from_str(&line)
                .map_err(|e| Error::CacheFormat { path: path.clone(), message: format!("line {}: {e}", no + 1) })?;
            if parsed.version == FORMAT_VERSION && parsed.pattern == literal && parsed.n <= depth {
                rows.insert(parsed.n, parsed.counts);
            }
        }
        if rows.len() != depth + 1 {
            return Ok(None);
        }
        Ok(Some(DistributionTable { pattern: p.clone(), rows: rows.into_values().collect() }))
    }
}
