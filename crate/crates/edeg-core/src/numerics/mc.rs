//! Sharded, reproducible Monte Carlo mean estimation.
//!
//! Work is split into fixed-size shards. Shard `i` runs its own generator
//! seeded by [`shard_seed`]`(seed, i)` and keeps
//! Welford statistics; the shard results are merged in index order. The
//! shard plan depends only on `samples`, never on the worker count, so a
//! fixed `(seed, samples)` pair reproduces the estimate bit for bit whether
//! the shards ran on one thread or many.

use crate::error::{Error, Result};
use crate::numerics::rng::{shard_seed, Rng};
use rayon::prelude::*;

/// Samples per shard; fixed so that results are independent of parallelism.
pub const SHARD_SIZE: u64 = 1 << 14;

/// Result of a Monte Carlo estimation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    /// Sample mean.
    pub mean: f64,
    /// `sample_std / sqrt(samples)`.
    pub std_error: f64,
    /// Number of samples drawn.
    pub samples: u64,
    /// Master seed the estimate was produced from.
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Welford {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Welford {
    pub fn new() -> Self {
        Welford {
            count: 0,
            mean: 0.0,
            m2: 0.0,
        }
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Chan et al. pairwise combination; applied left to right over shards.
    pub fn merge(self, other: Welford) -> Welford {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other;
        }
        let n = self.count + other.count;
        let d = other.mean - self.mean;
        let mean = self.mean + d * other.count as f64 / n as f64;
        let m2 =
            self.m2 + other.m2 + d * d * self.count as f64 * other.count as f64 / n as f64;
        Welford {
            count: n,
            mean,
            m2,
        }
    }

    pub fn into_estimate(self, seed: u64) -> MonteCarloEstimate {
        let var = if self.count > 1 {
            (self.m2 / (self.count as f64 - 1.0)).max(0.0)
        } else {
            0.0
        };
        MonteCarloEstimate {
            mean: self.mean,
            std_error: (var / self.count as f64).sqrt(),
            samples: self.count,
            seed,
        }
    }
}

/// Unbiased sample mean of `f(sample)` over `samples` draws from `sampler`.
///
/// A NaN from `f` aborts the run and reports the global index of the
/// offending sample.
pub fn mc_mean<T, S, F>(sampler: S, f: F, samples: u64, seed: u64) -> Result<MonteCarloEstimate>
where
    S: Fn(&mut Rng) -> T + Sync,
    F: Fn(&T) -> f64 + Sync,
{
    if samples < 2 {
        return Err(Error::Domain(format!(
            "mc_mean requires samples >= 2, got {samples}"
        )));
    }
    let num_shards = samples.div_ceil(SHARD_SIZE);
    let shard_stats: Vec<std::result::Result<Welford, u64>> = (0..num_shards)
        .into_par_iter()
        .map(|shard| {
            let start = shard * SHARD_SIZE;
            let count = SHARD_SIZE.min(samples - start);
            let mut rng = Rng::new(shard_seed(seed, shard));
            let mut acc = Welford::new();
            for local in 0..count {
                let x = f(&sampler(&mut rng));
                if x.is_nan() {
                    return Err(start + local);
                }
                acc.push(x);
            }
            Ok(acc)
        })
        .collect();

    let mut total = Welford::new();
    for stats in shard_stats {
        match stats {
            Ok(w) => total = total.merge(w),
            Err(index) => return Err(Error::NanSample { index }),
        }
    }
    Ok(total.into_estimate(seed))
}
