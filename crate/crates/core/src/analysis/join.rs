//! Joins mutation results and branch-report rows into per-class metrics.

use std::collections::{BTreeMap, HashMap};

use crate::campaign::{CampaignResult, Verdict};
use crate::mutgen::Mutant;

use super::coverage::ClassMetrics;
use super::report::BranchRecord;

/// Valid and killed mutant counts per class, from journaled results only.
/// Mutants that were never executed (outside a sample) do not count.
pub fn tally_results(mutants: &[Mutant], results: &[CampaignResult]) -> BTreeMap<String, (u64, u64)> {
    let verdicts: HashMap<&str, Verdict> = results
        .iter()
        .map(|r| (r.mutant_id.as_str(), r.verdict))
        .collect();
    let mut tally: BTreeMap<String, (u64, u64)> = BTreeMap::new();
    for m in mutants {
        let Some(verdict) = verdicts.get(m.id.as_str()) else {
            continue;
        };
        let entry = tally.entry(m.class_name.clone()).or_default();
        if verdict.is_valid() {
            entry.0 += 1;
        }
        if verdict.counts_as_killed() {
            entry.1 += 1;
        }
    }
    tally
}

#[derive(Debug, Clone, Default)]
pub struct Joined {
    /// One record per input class, sorted by class name.
    pub records: Vec<ClassMetrics>,
    /// Report rows that match no known class.
    pub unmatched_report_rows: Vec<String>,
    /// Known classes the report says nothing about.
    pub missing_from_report: Vec<String>,
}

/// Builds one `ClassMetrics` per class in `classes`.
///
/// Report rows are matched by exact class name. A nested-class row
/// (`Outer$Inner`, `Outer$1`) whose outer class is known is folded into the
/// outer class, since mutants are attributed per source file.
pub fn join_metrics(
    classes: &[String],
    tally: &BTreeMap<String, (u64, u64)>,
    branches: &[BranchRecord],
) -> Joined {
    let mut by_class: BTreeMap<&str, ClassMetrics> = classes
        .iter()
        .map(|c| {
            let (valid, killed) = tally.get(c).copied().unwrap_or_default();
            (
                c.as_str(),
                ClassMetrics {
                    class_name: c.clone(),
                    branch_covered: 0,
                    branch_total: 0,
                    has_branch_report: false,
                    mutants_valid: valid,
                    mutants_killed: killed,
                },
            )
        })
        .collect();

    let mut unmatched = Vec::new();
    for row in branches {
        let target = if by_class.contains_key(row.class_name.as_str()) {
            Some(row.class_name.as_str())
        } else {
            row.class_name
                .split_once('$')
                .map(|(outer, _)| outer)
                .filter(|outer| by_class.contains_key(outer))
        };
        match target.and_then(|t| by_class.get_mut(t)) {
            Some(metrics) => {
                metrics.branch_covered += row.covered;
                metrics.branch_total += row.total;
                metrics.has_branch_report = true;
            }
            None => unmatched.push(row.class_name.clone()),
        }
    }
    unmatched.sort();

    let records: Vec<ClassMetrics> = by_class.into_values().collect();
    let missing_from_report = records
        .iter()
        .filter(|r| !r.has_branch_report)
        .map(|r| r.class_name.clone())
        .collect();
    Joined {
        records,
        unmatched_report_rows: unmatched,
        missing_from_report,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutgen::MutationOperator;

    fn mutant(id: &str, class: &str) -> Mutant {
        Mutant {
            id: id.into(),
            file: format!("{class}.java"),
            line: 1,
            byte_offset: 0,
            class_name: class.into(),
            operator: MutationOperator::Ror,
            original: "<".into(),
            replacement: ">".into(),
            file_hash: String::new(),
        }
    }

    fn result(id: &str, verdict: Verdict) -> CampaignResult {
        CampaignResult {
            mutant_id: id.into(),
            verdict,
            compile_exit: None,
            test_exit: None,
            duration_seconds: 0.0,
            started_at: String::new(),
        }
    }

    fn branch(name: &str, covered: u64, total: u64) -> BranchRecord {
        BranchRecord {
            class_name: name.into(),
            covered,
            total,
        }
    }

    #[test]
    fn tally_counts_timeouts_and_skips_invalid() {
        let mutants = [mutant("1", "A"), mutant("2", "A"), mutant("3", "A"), mutant("4", "A"), mutant("5", "A")];
        let results = [
            result("1", Verdict::Killed),
            result("2", Verdict::Timeout),
            result("3", Verdict::Invalid),
            result("4", Verdict::Survived),
        ];
        assert_eq!(tally_results(&mutants, &results)["A"], (3, 2));
    }

    #[test]
    fn join_is_total_and_flags_gaps() {
        let classes = vec!["a.A".to_string(), "a.B".to_string(), "a.Empty".to_string()];
        let mut tally = BTreeMap::new();
        tally.insert("a.A".to_string(), (4, 3));
        tally.insert("a.B".to_string(), (2, 0));
        let branches = [
            branch("a.A", 3, 4),
            branch("a.A$Inner", 1, 4),
            branch("a.Empty", 0, 0),
            branch("z.Stray", 1, 1),
        ];
        let joined = join_metrics(&classes, &tally, &branches);
        assert_eq!(joined.records.len(), 3);
        let a = &joined.records[0];
        assert_eq!((a.branch_covered, a.branch_total, a.mutants_valid, a.mutants_killed), (4, 8, 4, 3));
        assert!(!joined.records[1].has_branch_report);
        assert!(joined.records[2].has_branch_report);
        assert_eq!(joined.records[2].mutants_valid, 0);
        assert_eq!(joined.unmatched_report_rows, ["z.Stray"]);
        assert_eq!(joined.missing_from_report, ["a.B"]);
    }
}
