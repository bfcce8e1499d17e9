//! CSV outputs: the per-class analysis table and plot-ready data.

use std::fmt::Write as _;

use super::category::{threshold_sweep, Category};
use super::coverage::ClassMetrics;
use super::summary::Analysis;

pub const ANALYSIS_HEADER: &str = "class,branch_pct,mutation_pct,mutants_valid,mutants_killed,category";
pub const SORTED_HEADER: &str = "rank,class,mutation_pct,branch_pct";
pub const SCATTER_HEADER: &str = "class,mutation_pct,branch_pct";
pub const SWEEP_HEADER: &str = "t,sim_cov,lob_him,hib_lom,nob,nom";

/// Branch percentage column; empty when the report has no row for the class.
fn branch_cell(r: &ClassMetrics) -> String {
    if r.has_branch_report {
        r.branch().one_decimal()
    } else {
        String::new()
    }
}

/// One row per class in record order (sorted by class name after a join).
pub fn analysis_csv(analysis: &Analysis) -> String {
    let mut out = String::from(ANALYSIS_HEADER);
    out.push('\n');
    for (r, category) in analysis.records.iter().zip(&analysis.categories) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.class_name,
            branch_cell(r),
            r.mutation().one_decimal(),
            r.mutants_valid,
            r.mutants_killed,
            category
        );
    }
    out
}

/// Classes ordered by mutation coverage (ties by name) with their branch
/// coverage alongside.
pub fn sorted_csv(records: &[ClassMetrics]) -> String {
    let mut sorted: Vec<&ClassMetrics> = records.iter().collect();
    sorted.sort_by(|a, b| {
        a.mutation()
            .cmp(&b.mutation())
            .then_with(|| a.class_name.cmp(&b.class_name))
    });
    let mut out = String::from(SORTED_HEADER);
    out.push('\n');
    for (i, r) in sorted.iter().enumerate() {
        let _ = writeln!(out, "{},{},{},{}", i + 1, r.class_name, r.mutation().one_decimal(), branch_cell(r));
    }
    out
}

/// (m, b) pairs for classes that have a branch-report row.
pub fn scatter_csv(records: &[ClassMetrics]) -> String {
    let mut out = String::from(SCATTER_HEADER);
    out.push('\n');
    for r in records.iter().filter(|r| r.has_branch_report) {
        let _ = writeln!(out, "{},{},{}", r.class_name, r.mutation().one_decimal(), r.branch().one_decimal());
    }
    out
}

pub fn sweep_csv(records: &[ClassMetrics], t_max: u32) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for (t, c) in threshold_sweep(records, t_max) {
        let _ = writeln!(out, "{t},{},{},{},{},{}", c.sim_cov, c.lob_him, c.hib_lom, c.nob, c.nom);
    }
    out
}

/// Inverse of `Category::label`.
pub fn parse_category(label: &str) -> Option<Category> {
    [Category::SimCov, Category::LobHim, Category::HibLom, Category::NoB, Category::NoM]
        .into_iter()
        .find(|c| c.label() == label)
}
