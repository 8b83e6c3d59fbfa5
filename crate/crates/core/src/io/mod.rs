//! File formats: Touchstone v1 and CSV sweeps, TOML filter/optimizer configs
//! and the TOML design file.

pub mod config;
pub mod csv;
pub mod design;
pub mod touchstone;

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Writes `contents` to a sibling temporary file and renames it over `path`,
/// so a failed write never leaves a truncated file behind.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(std::io::Error::other("output path has no file name")))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(Error::from)
}

pub(crate) fn toml_error(err: toml::de::Error, text: &str) -> Error {
    // a missing key is reported against the whole table; no useful line
    let missing = err.message().starts_with("missing field");
    let line = err
        .span()
        .filter(|_| !missing)
        .map(|span| text[..span.start.min(text.len())].matches('\n').count() + 1);
    Error::Parse {
        line,
        message: err.message().to_string(),
    }
}
