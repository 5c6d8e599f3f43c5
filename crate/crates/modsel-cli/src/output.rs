//! CSV assembly and atomic file emission.
//!
//! All numeric energy/probability fields use locale-independent scientific
//! notation with 15 significant digits; rows end in LF. Files are written to
//! a sibling temp path and renamed into place so a failed run never leaves a
//! partial output.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

/// 15-significant-digit scientific formatting for energies and rates.
pub fn sig15(x: f64) -> String {
    format!("{x:.14e}")
}

/// A CSV table under construction: mandatory header, LF line endings.
pub struct Csv {
    buf: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        Self { buf, columns: header.len() }
    }

    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "row width mismatch");
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn into_string(self) -> String {
        self.buf
    }
}

/// Write `contents` to `path` via a temp file in the same directory plus an
/// atomic rename; or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        None => {
            print!("{contents}");
            std::io::stdout().flush().ok();
            Ok(())
        }
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
            let tmp = match dir {
                Some(d) => d.join(format!(
                    ".{}.tmp",
                    path.file_name().unwrap_or_default().to_string_lossy()
                )),
                None => Path::new(&format!(
                    ".{}.tmp",
                    path.file_name().unwrap_or_default().to_string_lossy()
                ))
                .to_path_buf(),
            };
            fs::write(&tmp, contents)
                .with_context(|| format!("writing temp file {}", tmp.display()))?;
            fs::rename(&tmp, path)
                .with_context(|| format!("renaming into {}", path.display()))?;
            Ok(())
        }
    }
}
