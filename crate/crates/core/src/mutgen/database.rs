//! The mutant database (one JSON record per line, in generation order) and
//! its companion class index, which also lists classes that produced no
//! mutants.

use std::fmt::Write as _;
use std::path::Path;

use crate::jsonl::{self, JsonlError};

use super::mutant::Mutant;

pub fn write_database(path: &Path, mutants: &[Mutant]) -> Result<(), JsonlError> {
    jsonl::write_all(path, mutants)
}

pub fn read_database(path: &Path) -> Result<Vec<Mutant>, JsonlError> {
    jsonl::read_all(path)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassEntry {
    pub class_name: String,
    pub file: String,
    pub mutants: usize,
}

pub const CLASS_INDEX_HEADER: &str = "class,file,mutants";

pub fn write_class_index(path: &Path, entries: &[ClassEntry]) -> std::io::Result<()> {
    let mut out = String::from(CLASS_INDEX_HEADER);
    out.push('\n');
    for e in entries {
        let _ = writeln!(out, "{},{},{}", e.class_name, e.file, e.mutants);
    }
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, out)
}

pub fn read_class_index(path: &Path) -> std::io::Result<Vec<ClassEntry>> {
    let text = std::fs::read_to_string(path)?;
    let bad = |line: usize| {
        std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            format!("{}:{line}: malformed class index row", path.display()),
        )
    };
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<_> = line.split(',').collect();
        let [class_name, file, mutants] = fields[..] else {
            return Err(bad(i + 1));
        };
        entries.push(ClassEntry {
            class_name: class_name.to_string(),
            file: file.to_string(),
            mutants: mutants.parse().map_err(|_| bad(i + 1))?,
        });
    }
    Ok(entries)
}
