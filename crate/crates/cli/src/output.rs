//! Atomic output files: every declared output is written to a temporary file
//! in the target directory and renamed into place, so an interrupted run
//! never leaves a partial file behind.

use std::io::{BufWriter, Write};
use std::path::Path;

use tempfile::NamedTempFile;

use crate::CliError;

pub type AtomicWriter = BufWriter<NamedTempFile>;

pub fn write_atomic<F>(path: &Path, write_fn: F) -> Result<(), CliError>
where
    F: FnOnce(&mut AtomicWriter) -> Result<(), pivotlab_core::Error>,
{
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(parent)
        .map_err(|e| CliError::runtime(format!("creating {}: {e}", parent.display())))?;
    let tmp = tempfile::NamedTempFile::new_in(parent)
        .map_err(|e| CliError::runtime(format!("creating temp file in {}: {e}", parent.display())))?;
    let mut writer = BufWriter::new(tmp);
    write_fn(&mut writer).map_err(|e| CliError::runtime(e.to_string()))?;
    writer.flush().map_err(|e| CliError::runtime(e.to_string()))?;
    let tmp = writer
        .into_inner()
        .map_err(|e| CliError::runtime(e.to_string()))?;
    tmp.persist(path)
        .map_err(|e| CliError::runtime(format!("renaming into {}: {e}", path.display())))?;
    Ok(())
}
