//! Kendall's tau-b and Pearson's r, each with a two-sided p-value.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::special::{normal_two_sided, student_t_two_sided};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorrelationError {
    #[error("samples differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} observations, got {got}")]
    TooFew { needed: usize, got: usize },
    #[error("observations must be finite")]
    NonFinite,
    #[error("degenerate ranking: every value of one sample is tied")]
    DegenerateRanking,
    #[error("zero variance in one sample")]
    ZeroVariance,
}

fn check(xs: &[f64], ys: &[f64], needed: usize) -> Result<(), CorrelationError> {
    if xs.len() != ys.len() {
        return Err(CorrelationError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < needed {
        return Err(CorrelationError::TooFew {
            needed,
            got: xs.len(),
        });
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(CorrelationError::NonFinite);
    }
    Ok(())
}

fn cmp(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).expect("finite values")
}

/// Tie-group statistics of a sorted sample: (Σ t(t-1)/2, Σ t(t-1), Σ t(t-1)(t-2),
/// Σ t(t-1)(2t+5)) over groups of size t.
#[derive(Default)]
struct Ties {
    pairs: u64,
    v1: f64,
    v2: f64,
    vt: f64,
}

impl Ties {
    fn add_group(&mut self, t: u64) {
        if t < 2 {
            return;
        }
        let tf = t as f64;
        self.pairs += t * (t - 1) / 2;
        self.v1 += tf * (tf - 1.0);
        self.v2 += tf * (tf - 1.0) * (tf - 2.0);
        self.vt += tf * (tf - 1.0) * (2.0 * tf + 5.0);
    }

    fn of_sorted(values: impl Iterator<Item = f64>) -> Ties {
        let mut ties = Ties::default();
        let mut run = 0u64;
        let mut prev: Option<f64> = None;
        for v in values {
            if prev == Some(v) {
                run += 1;
            } else {
                ties.add_group(run);
                run = 1;
            }
            prev = Some(v);
        }
        ties.add_group(run);
        ties
    }
}

/// Sorts `v` by value with a stable merge sort, returning the number of
/// swaps (pairs that were strictly out of order).
fn merge_sort_swaps(v: &mut [f64], scratch: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = merge_sort_swaps(&mut v[..mid], &mut scratch[..mid]);
    swaps += merge_sort_swaps(&mut v[mid..], &mut scratch[mid..]);
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if cmp(v[j], v[i]) == Ordering::Less {
            scratch[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            scratch[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    scratch[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    scratch[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&scratch[..n]);
    swaps
}

/// Kendall's tau-b with a tie-corrected normal approximation for the
/// p-value. Runs in O(n log n) (Knight's algorithm).
pub fn kendall_tau_b(xs: &[f64], ys: &[f64]) -> Result<CorrelationResult, CorrelationError> {
    check(xs, ys, 2)?;
    let n = xs.len();
    let mut pairs: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
    pairs.sort_by(|a, b| cmp(a.0, b.0).then(cmp(a.1, b.1)));

    let x_ties = Ties::of_sorted(pairs.iter().map(|p| p.0));
    let mut joint_ties = 0u64;
    let mut run = 1u64;
    for w in pairs.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            joint_ties += run * (run - 1) / 2;
            run = 1;
        }
    }
    joint_ties += run * (run - 1) / 2;

    let mut ys_sorted: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut scratch = vec![0.0; n];
    let swaps = merge_sort_swaps(&mut ys_sorted, &mut scratch);
    let y_ties = Ties::of_sorted(ys_sorted.iter().copied());

    let n0 = (n as u64) * (n as u64 - 1) / 2;
    if x_ties.pairs == n0 || y_ties.pairs == n0 {
        return Err(CorrelationError::DegenerateRanking);
    }
    let s = n0 as f64 - x_ties.pairs as f64 - y_ties.pairs as f64 + joint_ties as f64
        - 2.0 * swaps as f64;
    let denom = ((n0 - x_ties.pairs) as f64 * (n0 - y_ties.pairs) as f64).sqrt();
    let tau = (s / denom).clamp(-1.0, 1.0);

    let nf = n as f64;
    let v0 = nf * (nf - 1.0) * (2.0 * nf + 5.0);
    let mut var = (v0 - x_ties.vt - y_ties.vt) / 18.0
        + x_ties.v1 * y_ties.v1 / (2.0 * nf * (nf - 1.0));
    if n > 2 {
        var += x_ties.v2 * y_ties.v2 / (9.0 * nf * (nf - 1.0) * (nf - 2.0));
    }
    let p_value = if var > 0.0 {
        normal_two_sided(s / var.sqrt())
    } else {
        1.0
    };
    Ok(CorrelationResult {
        statistic: tau,
        p_value,
        n,
    })
}

/// Sample Pearson correlation with a two-sided Student-t p-value on n - 2
/// degrees of freedom.
pub fn pearson_r(xs: &[f64], ys: &[f64]) -> Result<CorrelationResult, CorrelationError> {
    check(xs, ys, 3)?;
    // streaming co-moments
    let (mut mx, mut my, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, (&x, &y)) in xs.iter().zip(ys).enumerate() {
        let k = (i + 1) as f64;
        let dx = x - mx;
        let dy = y - my;
        mx += dx / k;
        my += dy / k;
        sxx += dx * (x - mx);
        syy += dy * (y - my);
        sxy += dx * (y - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(CorrelationError::ZeroVariance);
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    Ok(CorrelationResult {
        statistic: r,
        p_value: pearson_p_value(r, xs.len()),
        n: xs.len(),
    })
}

/// Two-sided p-value of a Pearson r over `n` observations.
pub fn pearson_p_value(r: f64, n: usize) -> f64 {
    let df = (n - 2) as f64;
    let one_minus = 1.0 - r * r;
    if one_minus <= 0.0 {
        return 0.0;
    }
    student_t_two_sided(r * (df / one_minus).sqrt(), df)
}
