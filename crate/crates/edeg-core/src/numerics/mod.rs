//! Shared numerical substrate: gamma functions, exact big-integer
//! arithmetic, deterministic quadrature engines, and a seedable, sharded
//! Monte Carlo engine.
//!
//! All operations are pure given their inputs and safe to call
//! concurrently. The Monte Carlo driver shards internally; a fixed seed and
//! sample count give identical results for any worker count.

pub mod factorial;
pub mod gamma;
pub mod mc;
pub mod quad;
pub mod rng;

pub use factorial::{exact_factorial, ExactInteger};
pub use gamma::{gamma_ratio, log_gamma};
pub use mc::{mc_mean, MonteCarloEstimate};
pub use quad::{adaptive_quad, gauss_legendre, tanh_sinh, GaussRule, QuadratureEstimate};
pub use rng::{shard_seed, Rng};
