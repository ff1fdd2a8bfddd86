//! The constant `Λ_k`: an integral over the monic degree-`k+1` polynomials
//! with zero subleading coefficient whose roots are all real,
//!
//! ```text
//! Λ_k = ∫_{R_k} e^{a_1} da,   R_k = { a : all roots of p_a are real }.
//! ```
//!
//! Closed forms exist for `k = 1, 2` only (`Λ_1 = 1`, `Λ_2 = sqrt(π/3)`).
//! Two independent Monte Carlo estimators cover `k <= 4`:
//!
//! * coefficient space — importance sampling. On `R_k` the coefficient
//!   `a_1` is the second elementary symmetric function of roots with zero
//!   sum, hence `a_1 = -||roots||²/2 <= 0`, and the `e^{a_1}` weight makes
//!   that direction integrable. `a_1 = -t` with `t ~ Exp(1)` cancels the
//!   weight exactly; the remaining coefficients are drawn uniformly from a
//!   box that provably contains the slice (all roots lie in
//!   `[-sqrt(2t), sqrt(2t)]`, so `|a_i| <= (2t)^((i+1)/2)`).
//! * root space — `Λ_k` equals a constant times the integral of
//!   `sqrt(discriminant)` over the ordered part of the unit sphere of the
//!   zero-sum hyperplane. Sampling the whole sphere and sorting coordinates
//!   descending folds the `(k+1)!` chambers onto the ordered cone, where
//!   the square root of the discriminant is nonnegative.

use crate::asymptotics::real_roots::{all_roots_real, MonicDepressedPolynomial};
use crate::error::{Error, Result};
use crate::numerics::gamma::log_gamma_unchecked;
use crate::numerics::{mc_mean, MonteCarloEstimate, Rng};
use crate::zonoid::mu_perp_basis;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Largest `k` for which the Monte Carlo estimators are supported; above
/// this the coefficient box becomes too loose for reliable sampling.
pub const LAMBDA_MC_MAX_K: u32 = 4;

/// Closed-form values, available for `k = 1, 2` only.
pub fn lambda_closed(k: u32) -> Result<f64> {
    match k {
        1 => Ok(1.0),
        2 => Ok((std::f64::consts::PI / 3.0).sqrt()),
        _ => Err(Error::Unsupported(format!(
            "no closed form for Lambda_{k}; use the Monte Carlo estimators"
        ))),
    }
}

fn check_mc_k(k: u32) -> Result<()> {
    if !(1..=LAMBDA_MC_MAX_K).contains(&k) {
        return Err(Error::Unsupported(format!(
            "Lambda Monte Carlo supports 1 <= k <= {LAMBDA_MC_MAX_K}, got {k}"
        )));
    }
    Ok(())
}

/// Coefficient-space importance-sampling estimate of `Λ_k`.
pub fn lambda_mc_coefficient(k: u32, samples: u64, seed: u64) -> Result<MonteCarloEstimate> {
    check_mc_k(k)?;
    let k_us = k as usize;
    mc_mean(
        move |rng: &mut Rng| {
            let t = rng.exponential();
            let mut a = Vec::with_capacity(k_us);
            a.push(-t);
            let mut weight = 1.0;
            for i in 2..=k_us {
                let m = (2.0 * t).powf((i as f64 + 1.0) / 2.0);
                a.push(rng.uniform_in(-m, m));
                weight *= 2.0 * m;
            }
            (a, weight)
        },
        |(a, weight)| {
            let p = MonicDepressedPolynomial::new(a.clone()).expect("finite sample");
            if all_roots_real(&p) {
                *weight
            } else {
                0.0
            }
        },
        samples,
        seed,
    )
}

/// Root-space estimate of `Λ_k` through the sphere integral of the square
/// root of the discriminant.
pub fn lambda_mc_sphere(k: u32, samples: u64, seed: u64) -> Result<MonteCarloEstimate> {
    check_mc_k(k)?;
    let k_us = k as usize;
    let basis = mu_perp_basis(k_us);
    let big_k = (k * (k + 1) / 2) as f64;
    let kf = f64::from(k);

    // Γ((K+k)/2) 2^((K+k-2)/2) / sqrt(k+1) * |S^(k-1)| / (k+1)!
    let ln_area = (2.0f64).ln() + 0.5 * kf * std::f64::consts::PI.ln()
        - log_gamma_unchecked(0.5 * kf);
    let mut ln_fact = 0.0;
    for i in 2..=(k_us + 1) {
        ln_fact += (i as f64).ln();
    }
    let scale = (log_gamma_unchecked(0.5 * (big_k + kf))
        + 0.5 * (big_k + kf - 2.0) * (2.0f64).ln()
        - 0.5 * (kf + 1.0).ln()
        + ln_area
        - ln_fact)
        .exp();

    let raw = mc_mean(
        move |rng: &mut Rng| {
            loop {
                let mut x = vec![0.0f64; k_us + 1];
                for b in &basis {
                    let z = rng.gaussian();
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi += z * bi;
                    }
                }
                let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm > 1e-9 {
                    for xi in &mut x {
                        *xi /= norm;
                    }
                    x.sort_by(|p, q| q.partial_cmp(p).expect("finite coordinates"));
                    return x;
                }
            }
        },
        |x| {
            let mut prod = 1.0;
            for i in 0..x.len() {
                for j in (i + 1)..x.len() {
                    prod *= x[i] - x[j];
                }
            }
            prod
        },
        samples,
        seed,
    )?;

    Ok(MonteCarloEstimate {
        mean: scale * raw.mean,
        std_error: scale * raw.std_error,
        samples: raw.samples,
        seed: raw.seed,
    })
}

/// Default sampling plan for cached Monte Carlo `Λ_k` values.
pub const DEFAULT_LAMBDA_MC_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_LAMBDA_MC_SEED: u64 = 20_240_601;

type LambdaCache = Mutex<HashMap<(u32, u64, u64), f64>>;
static LAMBDA_CACHE: OnceLock<LambdaCache> = OnceLock::new();

/// `Λ_k` by the best available route: closed form for `k <= 2`, otherwise
/// the sphere Monte Carlo method, computed once per `(k, samples, seed)`
/// and cached in-process so downstream constants stay deterministic within
/// a run.
pub fn lambda(k: u32, samples: u64, seed: u64) -> Result<f64> {
    if k == 1 || k == 2 {
        return lambda_closed(k);
    }
    check_mc_k(k)?;
    let cache = LAMBDA_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&v) = cache
        .lock()
        .expect("lambda cache poisoned")
        .get(&(k, samples, seed))
    {
        return Ok(v);
    }
    let est = lambda_mc_sphere(k, samples, seed)?;
    cache
        .lock()
        .expect("lambda cache poisoned")
        .insert((k, samples, seed), est.mean);
    Ok(est.mean)
}
