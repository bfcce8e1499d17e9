use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{check_rate, SamplingError};

/// `round(rate * n)` items chosen by a seeded shuffle, returned in their
/// original order.
pub fn uniform_sample<T: Clone>(items: &[T], rate: f64, seed: u64) -> Result<Vec<T>, SamplingError> {
    check_rate(rate)?;
    let take = ((rate * items.len() as f64).round() as usize).min(items.len());
    Ok(pick(items, take, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// `take` items drawn without replacement, kept in input order.
pub(crate) fn pick<T: Clone>(items: &[T], take: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.shuffle(rng);
    let mut chosen = order[..take].to_vec();
    chosen.sort_unstable();
    chosen.into_iter().map(|i| items[i].clone()).collect()
}
