//! The five-way branch-versus-mutation categorization and threshold sweep.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::coverage::{ClassMetrics, Percent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    /// Similar coverage: the gap is within the threshold, or both are zero.
    SimCov,
    /// Low branch, high mutation coverage.
    LobHim,
    /// High branch, low mutation coverage.
    HibLom,
    /// No branch coverage but some mutation coverage.
    NoB,
    /// No mutation coverage but some branch coverage.
    NoM,
}

impl Category {
    pub fn label(self) -> &'static str {
        match self {
            Category::SimCov => "SimCov",
            Category::LobHim => "LoB-HiM",
            Category::HibLom => "HiB-LoM",
            Category::NoB => "NoB",
            Category::NoM => "NoM",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Categorizes a class from its mutation coverage `m`, branch coverage `b`
/// and similarity threshold `t` (percentage points).
pub fn classify(m: Percent, b: Percent, t: u32) -> Category {
    match (m.is_zero(), b.is_zero()) {
        (true, true) => Category::SimCov,
        (false, true) => Category::NoB,
        (true, false) => Category::NoM,
        (false, false) => {
            if m.gap_cmp(&b, t) == Ordering::Greater {
                Category::LobHim
            } else if b.gap_cmp(&m, t) == Ordering::Greater {
                Category::HibLom
            } else {
                Category::SimCov
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryCounts {
    pub sim_cov: usize,
    pub lob_him: usize,
    pub hib_lom: usize,
    pub nob: usize,
    pub nom: usize,
}

impl CategoryCounts {
    pub fn add(&mut self, category: Category) {
        match category {
            Category::SimCov => self.sim_cov += 1,
            Category::LobHim => self.lob_him += 1,
            Category::HibLom => self.hib_lom += 1,
            Category::NoB => self.nob += 1,
            Category::NoM => self.nom += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.sim_cov + self.lob_him + self.hib_lom + self.nob + self.nom
    }

    /// The three counts the threshold can move.
    fn threshold_sensitive(&self) -> (usize, usize, usize) {
        (self.sim_cov, self.lob_him, self.hib_lom)
    }
}

pub fn count_categories(records: &[ClassMetrics], t: u32) -> CategoryCounts {
    let mut counts = CategoryCounts::default();
    for r in records {
        counts.add(classify(r.mutation(), r.branch(), t));
    }
    counts
}

/// Counts for every t in `1..=t_max`.
pub fn threshold_sweep(records: &[ClassMetrics], t_max: u32) -> Vec<(u32, CategoryCounts)> {
    (1..=t_max)
        .map(|t| (t, count_categories(records, t)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivedThreshold {
    pub t: u32,
    /// No plateau of the requested width fits below `t_max`.
    pub plateau_missing: bool,
}

/// Picks the smallest t whose neighborhood no longer changes the category
/// counts: the counts must be identical on the `window` values ending at t
/// and stay identical for every larger t up to `t_max`.
///
/// Only SimCov, LoB-HiM and HiB-LoM are compared; NoB and NoM do not depend
/// on t.
pub fn derive_threshold(records: &[ClassMetrics], t_max: u32, window: u32) -> DerivedThreshold {
    let window = window.max(1);
    let t_max = t_max.max(1);
    let counts: Vec<_> = (0..=t_max)
        .map(|t| count_categories(records, t).threshold_sensitive())
        .collect();
    // last t at which the counts differ from t - 1
    let last_change = (1..=t_max)
        .rev()
        .find(|&t| counts[t as usize] != counts[t as usize - 1])
        .unwrap_or(0);
    let t = (last_change + window - 1).max(1);
    if t > t_max {
        DerivedThreshold {
            t: t_max,
            plateau_missing: true,
        }
    } else {
        DerivedThreshold {
            t,
            plateau_missing: false,
        }
    }
}
