//! Injecting a mutant into a workspace and taking it back out.

use std::fs;
use std::path::{Path, PathBuf};

use super::mutant::{content_hash, Mutant};

#[derive(Debug, thiserror::Error)]
pub enum PatchError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}: content does not match mutant {id} ({reason}); regenerate mutants")]
    Stale {
        file: String,
        id: String,
        reason: &'static str,
    },
}

fn read(path: &Path) -> Result<Vec<u8>, PatchError> {
    fs::read(path).map_err(|source| PatchError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), PatchError> {
    fs::write(path, bytes).map_err(|source| PatchError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn stale(mutant: &Mutant, reason: &'static str) -> PatchError {
    PatchError::Stale {
        file: mutant.file.clone(),
        id: mutant.id.clone(),
        reason,
    }
}

/// Writes the mutated file. The file must be pristine: its hash must equal
/// `mutant.file_hash`, so a second apply without a restore is refused.
pub fn apply_mutant(workspace: &Path, mutant: &Mutant) -> Result<(), PatchError> {
    let path = workspace.join(&mutant.file);
    let original = read(&path)?;
    if content_hash(&original) != mutant.file_hash {
        return Err(stale(mutant, "file hash mismatch"));
    }
    if original.get(mutant.byte_offset..mutant.end_offset()) != Some(mutant.original.as_bytes()) {
        return Err(stale(mutant, "operator not found at offset"));
    }
    write(&path, &mutant.splice(&original))
}

/// Puts the original lexeme back. Restoring an already pristine file is a
/// no-op; anything else that does not reproduce `file_hash` is refused.
pub fn restore(workspace: &Path, mutant: &Mutant) -> Result<(), PatchError> {
    let path = workspace.join(&mutant.file);
    let current = read(&path)?;
    if content_hash(&current) == mutant.file_hash {
        return Ok(());
    }
    let end = mutant.byte_offset + mutant.replacement.len();
    if current.get(mutant.byte_offset..end) != Some(mutant.replacement.as_bytes()) {
        return Err(stale(mutant, "mutant is not applied"));
    }
    let mut pristine = Vec::with_capacity(current.len() + mutant.original.len());
    pristine.extend_from_slice(&current[..mutant.byte_offset]);
    pristine.extend_from_slice(mutant.original.as_bytes());
    pristine.extend_from_slice(&current[end..]);
    if content_hash(&pristine) != mutant.file_hash {
        return Err(stale(mutant, "restored content does not match recorded hash"));
    }
    write(&path, &pristine)
}

/// Checks whether the file a mutant targets is currently pristine.
pub fn is_pristine(workspace: &Path, mutant: &Mutant) -> Result<bool, PatchError> {
    let current = read(&workspace.join(&mutant.file))?;
    Ok(content_hash(&current) == mutant.file_hash)
}

/// Repairs files left mutated by an interrupted run: for each dirty file,
/// finds the mutant whose restore reproduces the pristine hash. Returns the
/// ids of the mutants that were rolled back.
pub fn recover_workspace(workspace: &Path, mutants: &[Mutant]) -> Result<Vec<String>, PatchError> {
    let mut recovered = Vec::new();
    let mut checked = std::collections::HashSet::new();
    for m in mutants {
        if !checked.insert(m.file.as_str()) || is_pristine(workspace, m)? {
            continue;
        }
        let candidates = mutants.iter().filter(|c| c.file == m.file);
        let mut fixed = false;
        for c in candidates {
            if restore(workspace, c).is_ok() {
                recovered.push(c.id.clone());
                fixed = true;
                break;
            }
        }
        if !fixed {
            return Err(stale(m, "file modified outside the campaign"));
        }
    }
    Ok(recovered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutgen::mutant::mutants_in_source;
    use crate::mutgen::operators::OperatorSet;

    fn setup(src: &str) -> (tempfile::TempDir, Vec<Mutant>) {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir_all(dir.path().join("src")).unwrap();
        fs::write(dir.path().join("src/A.java"), src).unwrap();
        let (ms, _) = mutants_in_source("src/A.java", "A", src, &OperatorSet::default());
        (dir, ms)
    }

    #[test]
    fn apply_then_restore_is_identity() {
        let src = "int f(int a, int b) { return a + b >= 3 && !flag; }\n";
        let (dir, ms) = setup(src);
        for m in &ms {
            apply_mutant(dir.path(), m).unwrap();
            let patched = fs::read_to_string(dir.path().join(&m.file)).unwrap();
            assert_ne!(patched, src);
            restore(dir.path(), m).unwrap();
            assert_eq!(fs::read_to_string(dir.path().join(&m.file)).unwrap(), src);
        }
    }

    #[test]
    fn invalid_type_mutant_is_still_generated() {
        // string concatenation: "-" would not compile, and that is caught later
        let src = "String s = a + b;";
        let (dir, ms) = setup(src);
        let minus = ms.iter().find(|m| m.replacement == "-").unwrap();
        apply_mutant(dir.path(), minus).unwrap();
        assert_eq!(
            fs::read_to_string(dir.path().join("src/A.java")).unwrap(),
            "String s = a - b;"
        );
    }

    #[test]
    fn double_apply_is_refused() {
        let (dir, ms) = setup("a + b");
        apply_mutant(dir.path(), &ms[0]).unwrap();
        let err = apply_mutant(dir.path(), &ms[1]).unwrap_err();
        assert!(err.to_string().contains("regenerate mutants"), "{err}");
    }

    #[test]
    fn stale_database_is_refused() {
        let (dir, ms) = setup("a + b");
        fs::write(dir.path().join("src/A.java"), "a +  b").unwrap();
        assert!(matches!(
            apply_mutant(dir.path(), &ms[0]),
            Err(PatchError::Stale { .. })
        ));
    }

    #[test]
    fn restore_of_pristine_is_noop() {
        let (dir, ms) = setup("a + b");
        restore(dir.path(), &ms[0]).unwrap();
        assert_eq!(fs::read_to_string(dir.path().join("src/A.java")).unwrap(), "a + b");
    }

    #[test]
    fn recovery_after_crash() {
        let src = "x = a < b; y = c * d;";
        let (dir, ms) = setup(src);
        let victim = ms.iter().find(|m| m.original == "*").unwrap();
        apply_mutant(dir.path(), victim).unwrap();
        let rolled = recover_workspace(dir.path(), &ms).unwrap();
        assert_eq!(rolled, vec![victim.id.clone()]);
        assert_eq!(fs::read_to_string(dir.path().join("src/A.java")).unwrap(), src);
    }
}
