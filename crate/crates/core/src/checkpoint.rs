use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Progress marker written after every completed block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub fingerprint: String,
    pub last_completed_n: u64,
    pub record_count: u64,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Self> {
        let corrupt = |reason: String| Error::CorruptCheckpoint {
            path: path.to_owned(),
            reason,
        };
        let text = fs::read_to_string(path).map_err(|e| corrupt(e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))
    }

    /// Temp file in the same directory, then rename.
    pub fn store(&self, path: &Path) -> Result<()> {
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        serde_json::to_writer(&mut tmp, self)?;
        tmp.write_all(b"\n")?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }
}
