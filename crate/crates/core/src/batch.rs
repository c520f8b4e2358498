//! Ordered parallel maps on a dedicated worker pool.

use rayon::prelude::*;

use crate::score::{score_image, FusionConfig, QualityBreakdown};
use crate::{Error, Result, RgbImage};

/// Applies `f` to every item on a pool of `workers` threads and returns
/// the results in input order.
pub fn map_ordered<T, R, F>(items: &[T], workers: usize, f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync + Send,
{
    if workers == 0 {
        return Err(Error::BadConfig("worker count must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::BadConfig(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect()))
}

/// Scores `images` with `workers` threads; result `i` belongs to image `i`.
pub fn score_batch(
    images: &[RgbImage],
    cfg: &FusionConfig,
    workers: usize,
) -> Result<Vec<Result<QualityBreakdown>>> {
    cfg.validate()?;
    map_ordered(images, workers, |_, img| score_image(img, cfg))
}
