//! The mutant-by-mutant loop: inject, build, test, record, restore, repeat.

use std::collections::{HashSet, VecDeque};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{mpsc, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::mutgen::patch::{self, PatchError};
use crate::mutgen::Mutant;

use super::journal::{CampaignResult, Journal, JournalError};
use super::process::run_phase;
use super::verdict::{judge, Verdict};

/// Lower bound for the derived timeout so that very fast suites are not
/// judged by process start-up jitter.
pub const MIN_DEFAULT_TIMEOUT_SECONDS: f64 = 1.0;
pub const TIMEOUT_FACTOR: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub workspace_root: PathBuf,
    pub compile_cmd: Option<String>,
    pub test_cmd: String,
    /// Per-phase timeout; derived from the baseline when absent.
    pub timeout_seconds: Option<f64>,
    pub workers: usize,
}

impl CampaignConfig {
    pub fn new(workspace_root: impl Into<PathBuf>, test_cmd: impl Into<String>) -> Self {
        CampaignConfig {
            workspace_root: workspace_root.into(),
            compile_cmd: None,
            test_cmd: test_cmd.into(),
            timeout_seconds: None,
            workers: 1,
        }
    }

    fn validate(&self) -> Result<(), CampaignError> {
        if self.test_cmd.trim().is_empty() {
            return Err(CampaignError::Config("test command is empty".into()));
        }
        if self.workers == 0 {
            return Err(CampaignError::Config("workers must be at least 1".into()));
        }
        if let Some(t) = self.timeout_seconds {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CampaignError::Config(format!("timeout must be positive, got {t}")));
            }
        }
        if self.compile_cmd.as_deref().is_some_and(|c| c.trim().is_empty()) {
            return Err(CampaignError::Config("compile command is empty".into()));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CampaignError {
    #[error("invalid campaign configuration: {0}")]
    Config(String),
    #[error("baseline not green: {phase} command exited with {exit}")]
    BaselineNotGreen { phase: &'static str, exit: i32 },
    #[error("could not run {phase} command: {source}")]
    Spawn {
        phase: &'static str,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Patch(#[from] PatchError),
    #[error(transparent)]
    Journal(#[from] JournalError),
    #[error("workspace copy failed: {0}")]
    Copy(String),
}

/// A campaign whose baseline has been verified green.
#[derive(Debug, Clone)]
pub struct Campaign {
    config: CampaignConfig,
    baseline_seconds: f64,
    timeout: Duration,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Stop after executing this many mutants (the rest stay unjournaled).
    pub limit: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct CampaignOutcome {
    /// One result per input mutant that has been journaled, ordered by id.
    pub results: Vec<CampaignResult>,
    pub executed: usize,
    pub skipped: usize,
    pub wall_seconds: f64,
}

impl CampaignOutcome {
    pub fn summary(&self) -> CampaignSummary {
        CampaignSummary::from_results(&self.results, self.wall_seconds)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub total: usize,
    pub killed: usize,
    pub survived: usize,
    pub invalid: usize,
    pub timeout: usize,
    pub wall_seconds: f64,
    pub mean_iteration_seconds: f64,
}

impl CampaignSummary {
    pub fn from_results(results: &[CampaignResult], wall_seconds: f64) -> Self {
        let count = |v: Verdict| results.iter().filter(|r| r.verdict == v).count();
        let mean = if results.is_empty() {
            0.0
        } else {
            results.iter().map(|r| r.duration_seconds).sum::<f64>() / results.len() as f64
        };
        CampaignSummary {
            total: results.len(),
            killed: count(Verdict::Killed),
            survived: count(Verdict::Survived),
            invalid: count(Verdict::Invalid),
            timeout: count(Verdict::Timeout),
            wall_seconds,
            mean_iteration_seconds: mean,
        }
    }
}

/// Runs the compile and test commands on the pristine workspace. Both must
/// exit zero; the combined wall time is the baseline.
pub fn verify_green(config: &CampaignConfig) -> Result<f64, CampaignError> {
    config.validate()?;
    let start = Instant::now();
    let phases = [("compile", config.compile_cmd.as_deref()), ("test", Some(config.test_cmd.as_str()))];
    for (phase, cmd) in phases {
        let Some(cmd) = cmd else { continue };
        let out = run_phase(cmd, &config.workspace_root, &[], None)
            .map_err(|source| CampaignError::Spawn { phase, source })?;
        match out.exit {
            Some(0) => {}
            other => {
                return Err(CampaignError::BaselineNotGreen {
                    phase,
                    exit: other.unwrap_or(-1),
                })
            }
        }
    }
    Ok(start.elapsed().as_secs_f64())
}

impl Campaign {
    /// Verifies the baseline and fixes the timeout.
    pub fn prepare(config: CampaignConfig) -> Result<Campaign, CampaignError> {
        let baseline_seconds = verify_green(&config)?;
        Campaign::with_baseline(config, baseline_seconds)
    }

    /// Builds a campaign from an already measured baseline.
    pub fn with_baseline(config: CampaignConfig, baseline_seconds: f64) -> Result<Campaign, CampaignError> {
        config.validate()?;
        let timeout = match config.timeout_seconds {
            Some(t) if t < baseline_seconds => {
                return Err(CampaignError::Config(format!(
                    "timeout {t:.3}s is shorter than the baseline run ({baseline_seconds:.3}s)"
                )))
            }
            Some(t) => t,
            None => (TIMEOUT_FACTOR * baseline_seconds).max(MIN_DEFAULT_TIMEOUT_SECONDS),
        };
        Ok(Campaign {
            config,
            baseline_seconds,
            timeout: Duration::from_secs_f64(timeout),
        })
    }

    pub fn baseline_seconds(&self) -> f64 {
        self.baseline_seconds
    }

    pub fn timeout(&self) -> Duration {
        self.timeout
    }

    pub fn config(&self) -> &CampaignConfig {
        &self.config
    }

    /// Evaluates every mutant not yet in the journal.
    pub fn run(
        &self,
        mutants: &[Mutant],
        journal_path: &Path,
        options: &RunOptions,
    ) -> Result<CampaignOutcome, CampaignError> {
        let start = Instant::now();
        let root = &self.config.workspace_root;
        let recovered = patch::recover_workspace(root, mutants)?;
        for id in &recovered {
            log::warn!("restored file left mutated by mutant {id}");
        }

        let mut journal = Journal::open(journal_path)?;
        let mut seen = HashSet::new();
        let pending: VecDeque<&Mutant> = mutants
            .iter()
            .filter(|m| seen.insert(m.id.as_str()) && !journal.contains(&m.id))
            .collect();
        let skipped = seen.len() - pending.len();
        let pending: VecDeque<&Mutant> = match options.limit {
            Some(limit) => pending.into_iter().take(limit).collect(),
            None => pending,
        };
        let executed_target = pending.len();

        let mut failure = None;
        let mut executed = 0;
        if !pending.is_empty() {
            let workers = self.config.workers.min(pending.len());
            let copies = if workers > 1 {
                (0..workers)
                    .map(|_| copy_workspace(root))
                    .collect::<Result<Vec<_>, _>>()?
            } else {
                Vec::new()
            };
            let workspaces: Vec<&Path> = if copies.is_empty() {
                vec![root.as_path()]
            } else {
                copies.iter().map(|d| d.path()).collect()
            };

            let queue = Mutex::new(pending);
            let abort = AtomicBool::new(false);
            let (tx, rx) = mpsc::channel::<Result<CampaignResult, CampaignError>>();
            std::thread::scope(|scope| {
                for ws in &workspaces {
                    let tx = tx.clone();
                    let queue = &queue;
                    let abort = &abort;
                    scope.spawn(move || loop {
                        if abort.load(Ordering::SeqCst) {
                            break;
                        }
                        let next = queue.lock().expect("queue lock").pop_front();
                        let Some(mutant) = next else { break };
                        let outcome = self.evaluate(ws, mutant);
                        let failed = outcome.is_err();
                        if tx.send(outcome).is_err() || failed {
                            break;
                        }
                    });
                }
                drop(tx);
                for outcome in rx {
                    match outcome.and_then(|r| journal.append(r).map_err(CampaignError::from)) {
                        Ok(()) => executed += 1,
                        Err(e) => {
                            abort.store(true, Ordering::SeqCst);
                            failure.get_or_insert(e);
                        }
                    }
                }
            });
        }
        if let Some(e) = failure {
            return Err(e);
        }
        debug_assert_eq!(executed, executed_target);

        let mut results: Vec<CampaignResult> = seen
            .iter()
            .filter_map(|id| journal.get(id).cloned())
            .collect();
        results.sort_by(|a, b| a.mutant_id.cmp(&b.mutant_id));
        Ok(CampaignOutcome {
            results,
            executed,
            skipped,
            wall_seconds: start.elapsed().as_secs_f64(),
        })
    }

    /// One iteration: apply, compile, test, restore. The timing covers all four.
    fn evaluate(&self, workspace: &Path, mutant: &Mutant) -> Result<CampaignResult, CampaignError> {
        let started_at = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true);
        let start = Instant::now();
        patch::apply_mutant(workspace, mutant)?;
        let phases = self.run_phases(workspace, mutant);
        patch::restore(workspace, mutant)?;
        let (compile_exit, test_exit, timed_out) = phases?;
        Ok(CampaignResult {
            mutant_id: mutant.id.clone(),
            verdict: judge(compile_exit, test_exit, timed_out),
            compile_exit,
            test_exit,
            duration_seconds: start.elapsed().as_secs_f64(),
            started_at,
        })
    }

    fn run_phases(
        &self,
        workspace: &Path,
        mutant: &Mutant,
    ) -> Result<(Option<i32>, Option<i32>, bool), CampaignError> {
        let env = [("MUTANT_ID", mutant.id.as_str())];
        let mut compile_exit = None;
        if let Some(cmd) = &self.config.compile_cmd {
            let out = run_phase(cmd, workspace, &env, Some(self.timeout))
                .map_err(|source| CampaignError::Spawn { phase: "compile", source })?;
            if out.timed_out {
                return Ok((None, None, true));
            }
            compile_exit = out.exit;
            if compile_exit != Some(0) {
                return Ok((compile_exit, None, false));
            }
        }
        let out = run_phase(&self.config.test_cmd, workspace, &env, Some(self.timeout))
            .map_err(|source| CampaignError::Spawn { phase: "test", source })?;
        Ok((compile_exit, out.exit, out.timed_out))
    }
}

/// Full copy of the workspace in a fresh temporary directory.
pub fn copy_workspace(root: &Path) -> Result<tempfile::TempDir, CampaignError> {
    let err = |e: &dyn std::fmt::Display| CampaignError::Copy(e.to_string());
    let dir = tempfile::Builder::new()
        .prefix("mutcov-worker-")
        .tempdir()
        .map_err(|e| err(&e))?;
    for entry in walkdir::WalkDir::new(root).follow_links(false) {
        let entry = entry.map_err(|e| err(&e))?;
        let rel = entry.path().strip_prefix(root).map_err(|e| err(&e))?;
        let target = dir.path().join(rel);
        let ft = entry.file_type();
        if ft.is_dir() {
            std::fs::create_dir_all(&target).map_err(|e| err(&e))?;
        } else if ft.is_symlink() {
            #[cfg(unix)]
            {
                let link = std::fs::read_link(entry.path()).map_err(|e| err(&e))?;
                std::os::unix::fs::symlink(link, &target).map_err(|e| err(&e))?;
            }
        } else {
            std::fs::copy(entry.path(), &target).map_err(|e| err(&e))?;
        }
    }
    Ok(dir)
}
