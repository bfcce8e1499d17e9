//! Coverage percentages kept as exact ratios.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverageError {
    #[error("{hit} killed mutants exceed {total} valid mutants")]
    KilledExceedsValid { hit: u64, total: u64 },
    #[error("{hit} covered branches exceed {total} branches")]
    CoveredExceedsTotal { hit: u64, total: u64 },
}

/// A percentage `100 * num / den`, compared exactly. A zero denominator
/// stands for 0%.
#[derive(Debug, Clone, Copy)]
pub struct Percent {
    num: u64,
    den: u64,
}

impl Percent {
    pub const ZERO: Percent = Percent { num: 0, den: 1 };

    /// `num / den` as a percentage; `den == 0` gives 0%.
    pub fn ratio(num: u64, den: u64) -> Percent {
        if den == 0 {
            Percent::ZERO
        } else {
            Percent { num, den }
        }
    }

    /// A whole number of percentage points.
    pub fn points(p: u64) -> Percent {
        Percent { num: p, den: 100 }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn as_f64(&self) -> f64 {
        100.0 * self.num as f64 / self.den as f64
    }

    /// Both numerators over the common denominator `den_a * den_b`.
    fn cross(&self, other: &Percent) -> (i128, i128, i128) {
        let a = self.num as i128 * other.den as i128;
        let b = other.num as i128 * self.den as i128;
        let common = self.den as i128 * other.den as i128;
        (a, b, common)
    }

    /// Signed gap `self - other` compared against `t` percentage points:
    /// returns the ordering of (self - other) relative to t.
    pub fn gap_cmp(&self, other: &Percent, t: u32) -> Ordering {
        let (a, b, common) = self.cross(other);
        // (a - b) / common * 100  vs  t
        ((a - b) * 100).cmp(&(t as i128 * common))
    }

    /// Absolute gap |self - other| compared against `t` percentage points.
    pub fn abs_gap_cmp(&self, other: &Percent, t: u32) -> Ordering {
        let (a, b, common) = self.cross(other);
        ((a - b).abs() * 100).cmp(&(t as i128 * common))
    }

    /// Rounded to one decimal, half away from zero.
    pub fn one_decimal(&self) -> String {
        let tenths = (1000 * self.num as u128 * 2 + self.den as u128) / (2 * self.den as u128);
        format!("{}.{}", tenths / 10, tenths % 10)
    }
}

impl PartialEq for Percent {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Percent {}

impl PartialOrd for Percent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Percent {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.cross(other);
        a.cmp(&b)
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}%", self.one_decimal())
    }
}

/// Killed over valid (non-Invalid) mutants; 0% when nothing is valid.
pub fn mutation_coverage(killed: u64, valid: u64) -> Result<Percent, CoverageError> {
    if killed > valid {
        return Err(CoverageError::KilledExceedsValid {
            hit: killed,
            total: valid,
        });
    }
    Ok(Percent::ratio(killed, valid))
}

/// Branches executed at least once over all branches; 0% when there are none.
pub fn branch_coverage(covered: u64, total: u64) -> Result<Percent, CoverageError> {
    if covered > total {
        return Err(CoverageError::CoveredExceedsTotal {
            hit: covered,
            total,
        });
    }
    Ok(Percent::ratio(covered, total))
}

/// Per-class join of branch and mutation counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class_name: String,
    pub branch_covered: u64,
    pub branch_total: u64,
    /// False when the branch report has no row for this class; the class is
    /// then categorized with b = 0 but left out of correlations.
    pub has_branch_report: bool,
    pub mutants_valid: u64,
    /// Killed plus timed-out mutants.
    pub mutants_killed: u64,
}

impl ClassMetrics {
    pub fn branch(&self) -> Percent {
        Percent::ratio(self.branch_covered, self.branch_total)
    }

    pub fn mutation(&self) -> Percent {
        Percent::ratio(self.mutants_killed, self.mutants_valid)
    }
}
