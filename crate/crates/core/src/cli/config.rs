//! Project configuration: a single JSON document. Relative paths resolve
//! against the directory holding the config file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::mutgen::OperatorSet;

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelCoefficients {
    pub offset: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default = "dot")]
    workspace_root: PathBuf,
    source_root: PathBuf,
    #[serde(default)]
    include_globs: Vec<String>,
    #[serde(default)]
    exclude_globs: Vec<String>,
    #[serde(default)]
    compile_cmd: Option<String>,
    test_cmd: String,
    #[serde(default)]
    operators: Vec<String>,
    #[serde(default = "default_db")]
    mutant_db: PathBuf,
    #[serde(default = "default_class_index")]
    class_index: PathBuf,
    #[serde(default = "default_journal")]
    journal: PathBuf,
    #[serde(default = "default_reports")]
    reports_dir: PathBuf,
    #[serde(default = "default_sample_ids")]
    sample_ids: PathBuf,
    #[serde(default = "default_sample_plan")]
    sample_plan: PathBuf,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    timeout_seconds: Option<f64>,
    #[serde(default = "one")]
    workers: usize,
    #[serde(default)]
    time_model: Option<ModelCoefficients>,
}

fn dot() -> PathBuf {
    PathBuf::from(".")
}
fn default_db() -> PathBuf {
    PathBuf::from("mutcov/mutants.jsonl")
}
fn default_class_index() -> PathBuf {
    PathBuf::from("mutcov/classes.csv")
}
fn default_journal() -> PathBuf {
    PathBuf::from("mutcov/journal.jsonl")
}
fn default_reports() -> PathBuf {
    PathBuf::from("mutcov/reports")
}
fn default_sample_ids() -> PathBuf {
    PathBuf::from("mutcov/sample.txt")
}
fn default_sample_plan() -> PathBuf {
    PathBuf::from("mutcov/sample_plan.json")
}
fn one() -> usize {
    1
}

/// Validated configuration with absolute paths.
#[derive(Debug, Clone)]
pub struct ProjectConfig {
    pub workspace_root: PathBuf,
    /// Relative to `workspace_root`.
    pub source_root: PathBuf,
    pub include_globs: Vec<String>,
    pub exclude_globs: Vec<String>,
    pub compile_cmd: Option<String>,
    pub test_cmd: String,
    pub operators: OperatorSet,
    pub mutant_db: PathBuf,
    pub class_index: PathBuf,
    pub journal: PathBuf,
    pub reports_dir: PathBuf,
    pub sample_ids: PathBuf,
    pub sample_plan: PathBuf,
    pub seed: u64,
    pub timeout_seconds: Option<f64>,
    pub workers: usize,
    pub time_model: Option<ModelCoefficients>,
}

impl ProjectConfig {
    pub fn load(path: &Path) -> Result<ProjectConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let raw: RawConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let base = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or(Path::new("."));
        let base = std::path::absolute(base)
            .map_err(|e| CliError::input(format!("{}: {e}", base.display())))?;
        ProjectConfig::from_raw(raw, &base)
    }

    pub fn from_json(text: &str, base: &Path) -> Result<ProjectConfig, CliError> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| CliError::input(e.to_string()))?;
        ProjectConfig::from_raw(raw, base)
    }

    fn from_raw(raw: RawConfig, base: &Path) -> Result<ProjectConfig, CliError> {
        let workspace_root = base.join(&raw.workspace_root);
        if !workspace_root.is_dir() {
            return Err(CliError::input(format!(
                "workspace_root {} is not a directory",
                workspace_root.display()
            )));
        }
        if raw.source_root.is_absolute() {
            return Err(CliError::input("source_root must be relative to workspace_root"));
        }
        if !workspace_root.join(&raw.source_root).is_dir() {
            return Err(CliError::input(format!(
                "source_root {} does not exist",
                workspace_root.join(&raw.source_root).display()
            )));
        }
        let operators =
            OperatorSet::parse(&raw.operators).map_err(|e| CliError::input(e.to_string()))?;
        if raw.workers == 0 {
            return Err(CliError::input("workers must be at least 1"));
        }
        let files = [
            ("mutant_db", base.join(&raw.mutant_db)),
            ("class_index", base.join(&raw.class_index)),
            ("journal", base.join(&raw.journal)),
            ("reports_dir", base.join(&raw.reports_dir)),
            ("sample_ids", base.join(&raw.sample_ids)),
            ("sample_plan", base.join(&raw.sample_plan)),
        ];
        for (i, (a, pa)) in files.iter().enumerate() {
            for (b, pb) in &files[i + 1..] {
                if pa == pb {
                    return Err(CliError::input(format!("{a} and {b} point to the same path")));
                }
            }
        }
        let [mutant_db, class_index, journal, reports_dir, sample_ids, sample_plan] =
            files.map(|(_, p)| p);
        Ok(ProjectConfig {
            workspace_root,
            source_root: raw.source_root,
            include_globs: raw.include_globs,
            exclude_globs: raw.exclude_globs,
            compile_cmd: raw.compile_cmd.filter(|c| !c.trim().is_empty()),
            test_cmd: raw.test_cmd,
            operators,
            mutant_db,
            class_index,
            journal,
            reports_dir,
            sample_ids,
            sample_plan,
            seed: raw.seed,
            timeout_seconds: raw.timeout_seconds,
            workers: raw.workers,
            time_model: raw.time_model,
        })
    }
}
