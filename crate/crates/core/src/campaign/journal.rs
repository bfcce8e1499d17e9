//! Append-only results journal, one JSON record per line, flushed per result.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, Read, Seek, SeekFrom};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::jsonl;

use super::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub mutant_id: String,
    pub verdict: Verdict,
    pub compile_exit: Option<i32>,
    pub test_exit: Option<i32>,
    pub duration_seconds: f64,
    pub started_at: String,
}

#[derive(Debug, thiserror::Error)]
pub enum JournalError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: corrupt journal record: {source}")]
    Corrupt {
        path: PathBuf,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

pub struct Journal {
    path: PathBuf,
    file: File,
    records: HashMap<String, CampaignResult>,
}

impl Journal {
    /// Opens (or creates) the journal and loads what is already recorded.
    ///
    /// A final line without a newline that does not parse is the remains of
    /// an interrupted write; it is cut off so the mutant runs again.
    pub fn open(path: &Path) -> Result<Journal, JournalError> {
        let io_err = |source| JournalError::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut file = jsonl::open_append(path).map_err(|e| match e {
            jsonl::JsonlError::Io { source, .. } => io_err(source),
            jsonl::JsonlError::Parse { .. } => unreachable!("open does not parse"),
        })?;
        let mut text = String::new();
        File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(io_err)?;

        let mut records = HashMap::new();
        let mut consumed = 0usize;
        for (i, line) in text.split_inclusive('\n').enumerate() {
            let complete = line.ends_with('\n');
            let body = line.trim();
            if !body.is_empty() {
                match serde_json::from_str::<CampaignResult>(body) {
                    Ok(r) => {
                        records.insert(r.mutant_id.clone(), r);
                    }
                    Err(_) if !complete => {
                        log::warn!(
                            "{}: dropping torn final record from an interrupted run",
                            path.display()
                        );
                        break;
                    }
                    Err(source) => {
                        return Err(JournalError::Corrupt {
                            path: path.to_path_buf(),
                            line: i + 1,
                            source,
                        })
                    }
                }
            }
            consumed += line.len();
        }
        if consumed < text.len() {
            file.set_len(consumed as u64).map_err(io_err)?;
            file.seek(SeekFrom::End(0)).map_err(io_err)?;
        } else if !text.is_empty() && !text.ends_with('\n') {
            // complete record missing its newline: terminate it
            use std::io::Write;
            file.write_all(b"\n").map_err(io_err)?;
        }
        Ok(Journal {
            path: path.to_path_buf(),
            file,
            records,
        })
    }

    pub fn get(&self, mutant_id: &str) -> Option<&CampaignResult> {
        self.records.get(mutant_id)
    }

    pub fn contains(&self, mutant_id: &str) -> bool {
        self.records.contains_key(mutant_id)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn append(&mut self, result: CampaignResult) -> Result<(), JournalError> {
        jsonl::append(&mut self.file, &result).map_err(|source| JournalError::Io {
            path: self.path.clone(),
            source,
        })?;
        self.records.insert(result.mutant_id.clone(), result);
        Ok(())
    }
}

/// Reads a journal without opening it for writing.
pub fn read_journal(path: &Path) -> Result<Vec<CampaignResult>, JournalError> {
    jsonl::read_all(path).map_err(|e| match e {
        jsonl::JsonlError::Io { source, .. } => JournalError::Io {
            path: path.to_path_buf(),
            source,
        },
        jsonl::JsonlError::Parse { line, source, .. } => JournalError::Corrupt {
            path: path.to_path_buf(),
            line,
            source,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(id: &str, verdict: Verdict) -> CampaignResult {
        CampaignResult {
            mutant_id: id.to_string(),
            verdict,
            compile_exit: Some(0),
            test_exit: Some(if verdict == Verdict::Killed { 1 } else { 0 }),
            duration_seconds: 0.5,
            started_at: "2024-01-01T00:00:00Z".to_string(),
        }
    }

    #[test]
    fn append_and_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("j/journal.jsonl");
        let mut j = Journal::open(&path).unwrap();
        assert!(j.is_empty());
        j.append(result("a", Verdict::Killed)).unwrap();
        j.append(result("b", Verdict::Survived)).unwrap();
        drop(j);
        let j = Journal::open(&path).unwrap();
        assert_eq!(j.len(), 2);
        assert_eq!(j.get("a").unwrap().verdict, Verdict::Killed);
        let text = std::fs::read_to_string(&path).unwrap();
        let keys: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        let mut keys: Vec<_> = keys.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(
            keys,
            ["compile_exit", "duration_seconds", "mutant_id", "started_at", "test_exit", "verdict"]
        );
    }

    #[test]
    fn torn_tail_is_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("journal.jsonl");
        let good = serde_json::to_string(&result("a", Verdict::Killed)).unwrap();
        std::fs::write(&path, format!("{good}\n{{\"mutant_id\":\"b\",\"verd")).unwrap();
        let mut j = Journal::open(&path).unwrap();
        assert_eq!(j.len(), 1);
        j.append(result("b", Verdict::Survived)).unwrap();
        drop(j);
        let records = read_journal(&path).unwrap();
        assert_eq!(records.len(), 2);
    }

    #[test]
    fn corrupt_middle_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("journal.jsonl");
        let good = serde_json::to_string(&result("a", Verdict::Killed)).unwrap();
        std::fs::write(&path, format!("garbage\n{good}\n")).unwrap();
        assert!(matches!(Journal::open(&path), Err(JournalError::Corrupt { line: 1, .. })));
    }
}
