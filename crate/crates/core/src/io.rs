//! Pattern and input file loading.

use std::fs;
use std::path::Path;

use crate::dictionary::Dictionary;
use crate::error::{Error, Result};

/// Reads a one-keyword-per-line pattern file.
pub fn load_patterns(path: &Path) -> Result<Dictionary> {
    let data = fs::read(path).map_err(|e| Error::io(path, e))?;
    Dictionary::parse_lines(&data)
}

/// Reads an input file verbatim.
pub fn load_input(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}
