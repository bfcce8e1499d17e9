//! Whole-project summary: category counts at the chosen threshold,
//! correlations, and overall coverages.

use serde::{Deserialize, Serialize};

use super::category::{classify, count_categories, derive_threshold, Category, CategoryCounts};
use super::correlation::{kendall_tau_b, pearson_r};
use super::coverage::{ClassMetrics, Percent};

pub const DEFAULT_T_MAX: u32 = 25;
pub const DEFAULT_WINDOW: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdChoice {
    Auto,
    Fixed(u32),
}

impl std::str::FromStr for ThresholdChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(ThresholdChoice::Auto);
        }
        s.parse()
            .map(ThresholdChoice::Fixed)
            .map_err(|_| format!("threshold must be `auto` or a non-negative integer, got `{s}`"))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AnalysisOptions {
    pub threshold: ThresholdChoice,
    pub t_max: u32,
    pub window: u32,
    /// Leave classes without valid mutants out of the correlations.
    pub exclude_zero_mutant: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            threshold: ThresholdChoice::Auto,
            t_max: DEFAULT_T_MAX,
            window: DEFAULT_WINDOW,
            exclude_zero_mutant: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kendall {
    pub tau: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pearson {
    pub r: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Overall {
    pub branch_pct: f64,
    pub mutation_pct: f64,
}

/// Correlations are `null` when they cannot be computed (too few classes,
/// or one coverage constant across classes).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSummary {
    pub threshold_t: u32,
    pub counts: CategoryCounts,
    pub kendall: Option<Kendall>,
    pub pearson: Option<Pearson>,
    pub overall: Overall,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub records: Vec<ClassMetrics>,
    pub categories: Vec<Category>,
    pub summary: AnalysisSummary,
    /// Set when the threshold was derived and no plateau fit below `t_max`.
    pub plateau_missing: bool,
}

fn one_decimal_number(p: Percent) -> f64 {
    p.one_decimal().parse().expect("formatted decimal")
}

pub fn analyze(records: Vec<ClassMetrics>, options: &AnalysisOptions) -> Analysis {
    let (threshold_t, plateau_missing) = match options.threshold {
        ThresholdChoice::Fixed(t) => (t, false),
        ThresholdChoice::Auto => {
            let d = derive_threshold(&records, options.t_max, options.window);
            (d.t, d.plateau_missing)
        }
    };
    let counts = count_categories(&records, threshold_t);
    let categories = records
        .iter()
        .map(|r| classify(r.mutation(), r.branch(), threshold_t))
        .collect();

    let (bs, ms): (Vec<f64>, Vec<f64>) = records
        .iter()
        .filter(|r| r.has_branch_report)
        .filter(|r| !options.exclude_zero_mutant || r.mutants_valid > 0)
        .map(|r| (r.branch().as_f64(), r.mutation().as_f64()))
        .unzip();
    let kendall = kendall_tau_b(&bs, &ms).ok().map(|k| Kendall {
        tau: k.statistic,
        p: k.p_value,
    });
    let pearson = pearson_r(&bs, &ms).ok().map(|c| Pearson {
        r: c.statistic,
        p: c.p_value,
    });

    let sum = |f: fn(&ClassMetrics) -> u64| records.iter().map(f).sum::<u64>();
    let overall = Overall {
        branch_pct: one_decimal_number(Percent::ratio(
            sum(|r| r.branch_covered),
            sum(|r| r.branch_total),
        )),
        mutation_pct: one_decimal_number(Percent::ratio(
            sum(|r| r.mutants_killed),
            sum(|r| r.mutants_valid),
        )),
    };
    Analysis {
        records,
        categories,
        summary: AnalysisSummary {
            threshold_t,
            counts,
            kendall,
            pearson,
            overall,
        },
        plateau_missing,
    }
}
