//! Mutant sampling and the linear time model used to size a campaign to a
//! wall-clock budget.

pub mod time_model;
pub mod uniform;
pub mod weighted;

pub use time_model::{estimate_budget, fit_time_model, TimeModel};
pub use uniform::uniform_sample;
pub use weighted::{weighted_sample, SamplingPlan, Strategy, WeightedParams, WeightedSample};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SamplingError {
    #[error("sampling rate must be in (0, 1], got {0}")]
    Rate(f64),
    #[error("beta must be finite and non-negative, got {0}")]
    Beta(f64),
    #[error("need at least 3 points to fit a time model, got {0}")]
    TooFewPoints(usize),
    #[error("cannot fit: iteration counts have no variance")]
    DegenerateX,
    #[error("{0} must be positive and finite")]
    NonPositive(&'static str),
}

pub(crate) fn check_rate(rate: f64) -> Result<(), SamplingError> {
    if rate > 0.0 && rate <= 1.0 {
        Ok(())
    } else {
        Err(SamplingError::Rate(rate))
    }
}
