//! Coverage arithmetic, categorization, correlation, and report joins.

pub mod category;
pub mod correlation;
pub mod coverage;
pub mod export;
pub mod join;
pub mod report;
pub mod special;
pub mod summary;

pub use category::{
    classify, count_categories, derive_threshold, threshold_sweep, Category, CategoryCounts,
    DerivedThreshold,
};
pub use correlation::{kendall_tau_b, pearson_r, CorrelationError, CorrelationResult};
pub use coverage::{branch_coverage, mutation_coverage, ClassMetrics, CoverageError, Percent};
pub use join::{join_metrics, tally_results, Joined};
pub use report::{parse_branch_report, BranchRecord, ReportError, ReportFormat};
pub use summary::{analyze, Analysis, AnalysisOptions, AnalysisSummary, ThresholdChoice};
