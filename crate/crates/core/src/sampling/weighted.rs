//! Class-weighted sampling: small classes are sampled at a higher rate than
//! large ones so that every class keeps a usable number of mutants.
//!
//! Class `c` with `N_c` mutants gets rate `r_c = clamp(K * N_c^-beta, m / N_c, 1)`
//! where `m` is the per-class minimum, and quota
//! `max(min(N_c, m), round(r_c * N_c))`. `K` is calibrated by bisection so
//! the overall ratio lands as close to the target as the integer quotas
//! allow.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::uniform::pick;
use super::{check_rate, SamplingError};

/// Allowed distance between achieved and target ratio before a warning.
pub const RATIO_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Uniform,
    Weighted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedParams {
    pub target_ratio: f64,
    pub beta: f64,
    pub min_per_class: usize,
    pub seed: u64,
}

/// Everything needed to reproduce a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub strategy: Strategy,
    pub target_ratio: f64,
    pub seed: u64,
    pub beta: Option<f64>,
    pub min_per_class: usize,
    pub quotas: BTreeMap<String, usize>,
}

#[derive(Debug, Clone)]
pub struct WeightedSample<T> {
    pub plan: SamplingPlan,
    /// Chosen items grouped by class (in key order), input order within a class.
    pub selected: Vec<T>,
    pub achieved_ratio: f64,
    pub warning: Option<String>,
}

fn quota(n: usize, k: f64, beta: f64, min_per_class: usize) -> usize {
    let nf = n as f64;
    let rate = (k * nf.powf(-beta)).max(min_per_class as f64 / nf).min(1.0);
    min_per_class.min(n).max((rate * nf).round() as usize)
}

fn total_quota(sizes: &[usize], k: f64, beta: f64, min_per_class: usize) -> usize {
    sizes.iter().map(|&n| quota(n, k, beta, min_per_class)).sum()
}

/// Finds the scale `K` whose quotas come closest to `target_ratio`.
fn calibrate(sizes: &[usize], target_ratio: f64, beta: f64, min_per_class: usize) -> f64 {
    let total = sizes.iter().sum::<usize>() as f64;
    let ratio = |k: f64| total_quota(sizes, k, beta, min_per_class) as f64 / total;
    // at `hi` every class is sampled in full
    let mut hi = sizes
        .iter()
        .map(|&n| (n as f64).powf(beta))
        .fold(1.0, f64::max);
    let mut lo = 0.0;
    if ratio(lo) >= target_ratio {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ratio(mid) >= target_ratio {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if target_ratio - ratio(lo) < ratio(hi) - target_ratio {
        lo
    } else {
        hi
    }
}

pub fn weighted_sample<T: Clone>(
    by_class: &BTreeMap<String, Vec<T>>,
    params: &WeightedParams,
) -> Result<WeightedSample<T>, SamplingError> {
    check_rate(params.target_ratio)?;
    if !(params.beta >= 0.0 && params.beta.is_finite()) {
        return Err(SamplingError::Beta(params.beta));
    }
    let classes: Vec<(&String, &Vec<T>)> = by_class.iter().filter(|(_, v)| !v.is_empty()).collect();
    let sizes: Vec<usize> = classes.iter().map(|(_, v)| v.len()).collect();
    let total: usize = sizes.iter().sum();

    let mut plan = SamplingPlan {
        strategy: Strategy::Weighted,
        target_ratio: params.target_ratio,
        seed: params.seed,
        beta: Some(params.beta),
        min_per_class: params.min_per_class,
        quotas: BTreeMap::new(),
    };
    if total == 0 {
        return Ok(WeightedSample {
            plan,
            selected: Vec::new(),
            achieved_ratio: 0.0,
            warning: None,
        });
    }

    let k = calibrate(&sizes, params.target_ratio, params.beta, params.min_per_class);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut selected = Vec::new();
    for (name, items) in &classes {
        let q = quota(items.len(), k, params.beta, params.min_per_class);
        plan.quotas.insert((*name).clone(), q);
        selected.extend(pick(items, q, &mut rng));
    }
    let achieved_ratio = selected.len() as f64 / total as f64;
    let warning = ((achieved_ratio - params.target_ratio).abs() > RATIO_TOLERANCE).then(|| {
        format!(
            "achieved sampling ratio {achieved_ratio:.4} is more than {RATIO_TOLERANCE} away from target {}",
            params.target_ratio
        )
    });
    Ok(WeightedSample {
        plan,
        selected,
        achieved_ratio,
        warning,
    })
}
