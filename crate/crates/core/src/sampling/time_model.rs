//! Linear model between campaign size and campaign time:
//! `mutants = offset + slope * (total time / time per iteration)`.

use serde::{Deserialize, Serialize};

use crate::analysis::correlation::pearson_p_value;

use super::SamplingError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeModel {
    pub offset: f64,
    pub slope: f64,
    /// Pearson correlation of the fitted points.
    pub r: f64,
    pub p_value: f64,
}

impl TimeModel {
    /// A model with known coefficients and no fit statistics.
    pub fn with_coefficients(offset: f64, slope: f64) -> Self {
        TimeModel {
            offset,
            slope,
            r: f64::NAN,
            p_value: f64::NAN,
        }
    }
}

/// Ordinary least squares over `(iteration_count, mutant_count)` points.
/// When every y is equal the fit is flat and r is reported as 0 with p = 1.
pub fn fit_time_model(points: &[(f64, f64)]) -> Result<TimeModel, SamplingError> {
    if points.len() < 3 {
        return Err(SamplingError::TooFewPoints(points.len()));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(SamplingError::NonPositive("point coordinates"));
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (x, y) in points {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx <= 0.0 {
        return Err(SamplingError::DegenerateX);
    }
    let slope = sxy / sxx;
    let offset = mean_y - slope * mean_x;
    let (r, p_value) = if syy > 0.0 {
        let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
        (r, pearson_p_value(r, points.len()))
    } else {
        (0.0, 1.0)
    };
    Ok(TimeModel {
        offset,
        slope,
        r,
        p_value,
    })
}

/// Largest campaign the budget allows:
/// `floor(offset + slope * budget / iteration)`, never negative.
pub fn estimate_budget(
    model: &TimeModel,
    total_budget_seconds: f64,
    iteration_seconds: f64,
) -> Result<u64, SamplingError> {
    if !(total_budget_seconds > 0.0 && total_budget_seconds.is_finite()) {
        return Err(SamplingError::NonPositive("total budget"));
    }
    if !(iteration_seconds > 0.0 && iteration_seconds.is_finite()) {
        return Err(SamplingError::NonPositive("iteration time"));
    }
    let estimate = model.offset + model.slope * total_budget_seconds / iteration_seconds;
    Ok(estimate.floor().max(0.0) as u64)
}
