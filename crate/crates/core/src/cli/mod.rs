//! Command-line front end.
//!
//! Exit codes: 0 success, 2 configuration or input error, 3 baseline not
//! green, 4 malformed branch report, 5 coverage below `--min-coverage`.

mod commands;
pub mod config;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::ProjectConfig;

use crate::analysis::{ReportFormat, ThresholdChoice};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BASELINE: u8 = 3;
pub const EXIT_REPORT: u8 = 4;
pub const EXIT_COVERAGE: u8 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        CliError::new(EXIT_INPUT, message)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Debug, Parser)]
#[command(name = "mutcov", version, about = "Mutation testing campaigns and branch-versus-mutation coverage analysis")]
pub struct Cli {
    /// Project configuration file (JSON).
    #[arg(short, long, global = true, default_value = "mutcov.json")]
    pub config: PathBuf,
    /// More logging (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the mutant database from the configured sources.
    Mutate(MutateArgs),
    /// Select a subset of mutants to run.
    Sample(SampleArgs),
    /// Run the campaign, resuming from the journal.
    Run(RunArgs),
    /// Join results with a branch report and categorize classes.
    Analyze(AnalyzeArgs),
    /// Fit a time model or estimate how many mutants fit in a time budget.
    Budget(BudgetArgs),
    /// Write plot-ready CSVs from the last analysis.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct MutateArgs {
    /// Operators to use, overriding the config (e.g. ROR,COR).
    #[arg(long, value_delimiter = ',')]
    pub operators: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Uniform,
    Weighted,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Time-model intercept (mutants).
    #[arg(long, requires = "model_slope", allow_hyphen_values = true)]
    pub model_offset: Option<f64>,
    /// Time-model slope (mutants per iteration-length of budget).
    #[arg(long, requires = "model_offset", allow_hyphen_values = true)]
    pub model_slope: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Fraction of mutants to select, in (0, 1].
    #[arg(long, conflicts_with = "budget_hours")]
    pub rate: Option<f64>,
    /// Wall-clock budget; the sample size comes from the time model.
    #[arg(long, requires = "iter_seconds")]
    pub budget_hours: Option<f64>,
    /// Measured seconds per mutant iteration.
    #[arg(long)]
    pub iter_seconds: Option<f64>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value = "uniform")]
    pub strategy: StrategyArg,
    /// Weighted strategy: how strongly large classes are down-weighted.
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    /// Weighted strategy: mutants kept per class at minimum.
    #[arg(long, default_value_t = 1)]
    pub min_per_class: usize,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// File of mutant ids (one per line) to run instead of the whole database.
    #[arg(long)]
    pub subset: Option<PathBuf>,
    /// Stop after this many newly executed mutants.
    #[arg(long)]
    pub limit: Option<usize>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Per-phase timeout in seconds (default: twice the baseline run).
    #[arg(long)]
    pub timeout: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub branch_report: PathBuf,
    /// Report format; inferred from the file extension when omitted.
    #[arg(long)]
    pub format: Option<ReportFormat>,
    /// Similarity threshold in percentage points, or `auto`.
    #[arg(long, default_value = "auto")]
    pub threshold: ThresholdChoice,
    /// Largest threshold tried by `auto`.
    #[arg(long, default_value_t = crate::analysis::summary::DEFAULT_T_MAX)]
    pub t_max: u32,
    /// Number of consecutive thresholds that must agree for `auto`.
    #[arg(long, default_value_t = crate::analysis::summary::DEFAULT_WINDOW)]
    pub window: u32,
    /// Leave classes without valid mutants out of the correlations.
    #[arg(long)]
    pub exclude_zero_mutant: bool,
    /// Exit with status 5 when overall mutation coverage is below this percentage.
    #[arg(long)]
    pub min_coverage: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// CSV of past campaigns (`iterations,mutants`) to fit the model from.
    #[arg(long)]
    pub fit: Option<PathBuf>,
    #[arg(long, requires = "iter_seconds")]
    pub budget_hours: Option<f64>,
    #[arg(long)]
    pub iter_seconds: Option<f64>,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Thresholds 1..=t-max in the sweep file.
    #[arg(long, default_value_t = crate::analysis::summary::DEFAULT_T_MAX)]
    pub t_max: u32,
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> Result<u8, CliError> {
    if let Command::Budget(args) = &cli.command {
        // needs no project when the model comes from flags or a fit file
        let config = if cli.config.exists() {
            Some(ProjectConfig::load(&cli.config)?)
        } else {
            None
        };
        return commands::budget(config.as_ref(), args);
    }
    let config = ProjectConfig::load(&cli.config)?;
    match &cli.command {
        Command::Mutate(args) => commands::mutate(&config, args),
        Command::Sample(args) => commands::sample(&config, args),
        Command::Run(args) => commands::run(&config, args),
        Command::Analyze(args) => commands::analyze(&config, args),
        Command::Report(args) => commands::report(&config, args),
        Command::Budget(_) => unreachable!(),
    }
}
