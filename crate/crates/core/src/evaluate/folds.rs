use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Seeded shuffle followed by a contiguous partition into `k` folds.
///
/// The first `n % k` folds receive one extra element, so sizes differ by at
/// most one. Deterministic for a fixed `(ids, k, seed)`.
pub fn kfold_split<T: Clone>(ids: &[T], k: usize, seed: u64) -> Result<Vec<Vec<T>>> {
    let n = ids.len();
    if k < 2 {
        return Err(Error::validation(format!("fold count must be at least 2 (got {k})")));
    }
    if k > n {
        return Err(Error::validation(format!(
            "fold count {k} exceeds the number of samples {n}"
        )));
    }
    let mut shuffled = ids.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let base = n / k;
    let extra = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let len = base + usize::from(f < extra);
        folds.push(shuffled[start..start + len].to_vec());
        start += len;
    }
    Ok(folds)
}
