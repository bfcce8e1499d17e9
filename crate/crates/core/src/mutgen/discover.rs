use std::path::{Path, PathBuf};

use globset::{Glob, GlobSet, GlobSetBuilder};
use walkdir::WalkDir;

pub const DEFAULT_INCLUDE: &str = "**/*.java";

fn build(patterns: &[String]) -> Result<GlobSet, globset::Error> {
    let mut builder = GlobSetBuilder::new();
    for p in patterns {
        builder.add(Glob::new(p)?);
    }
    builder.build()
}

/// Source files under `workspace_root/source_root` whose path relative to
/// the source root matches an include glob and no exclude glob. Returned
/// paths are relative to the workspace root, sorted.
pub fn discover_sources(
    workspace_root: &Path,
    source_root: &Path,
    include: &[String],
    exclude: &[String],
) -> Result<Vec<PathBuf>, globset::Error> {
    let default_include = [DEFAULT_INCLUDE.to_string()];
    let include = build(if include.is_empty() { &default_include } else { include })?;
    let exclude = build(exclude)?;
    let base = workspace_root.join(source_root);
    let mut files: Vec<PathBuf> = WalkDir::new(&base)
        .sort_by_file_name()
        .into_iter()
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file())
        .filter_map(|e| {
            let rel = e.path().strip_prefix(&base).ok()?.to_path_buf();
            (include.is_match(&rel) && !exclude.is_match(&rel)).then(|| source_root.join(rel))
        })
        .collect();
    files.sort();
    Ok(files)
}
