//! Degree of the complex Grassmannian in the Pluecker embedding.
//!
//! `delta_complex(k, n)` is the number of complex k-planes of CP^n meeting
//! `(k+1)(n-k)` generic subspaces of dimension `n-k-1`. It is an integer and
//! is computed exactly: every gamma value in the closed formula has an
//! integer argument, so the whole expression is a ratio of factorials,
//!
//! ```text
//! delta_complex(k, n) = d! * (0! 1! ... k!) / ((n-k)! (n-k+1)! ... n!),
//! d = (k+1)(n-k),
//! ```
//!
//! and the division is checked to be exact. The asymptotic companion grows
//! like `(k+1)^((k+1)n)` and is therefore evaluated entirely in log space.

use crate::error::{Error, Result};
use crate::numerics::factorial::{exact_factorial, ExactInteger};
use crate::numerics::gamma::log_gamma_unchecked;

fn check_kn(k: u32, n: u32) -> Result<()> {
    if k >= n {
        return Err(Error::Domain(format!(
            "delta_complex requires 0 <= k < n, got k = {k}, n = {n}"
        )));
    }
    Ok(())
}

/// Exact degree of the complex Grassmannian `G_C(k, n)`.
pub fn delta_complex(k: u32, n: u32) -> Result<ExactInteger> {
    check_kn(k, n)?;
    let d = u64::from(k + 1) * u64::from(n - k);
    let mut numerator = exact_factorial(d);
    for i in 0..=u64::from(k) {
        numerator = &numerator * &exact_factorial(i);
    }
    let mut denominator = ExactInteger::one();
    for j in u64::from(n - k)..=u64::from(n) {
        denominator = &denominator * &exact_factorial(j);
    }
    numerator.div_exact(&denominator)
}

/// `c(n) = Γ(2n-2) / (Γ(n) Γ(n-2))` as an exact integer ratio, `n >= 3`.
///
/// This is the coefficient in front of both `delta_{1,n}` integral
/// formulas; it also equals `n(n-2)/2 * delta_complex(1, n)`, which the
/// tests check.
pub fn schubert_c(n: u32) -> Result<ExactInteger> {
    if n < 3 {
        return Err(Error::Domain(format!("c(n) requires n >= 3, got {n}")));
    }
    let num = exact_factorial(2 * u64::from(n) - 3);
    let den = &exact_factorial(u64::from(n) - 1) * &exact_factorial(u64::from(n) - 3);
    num.div_exact(&den)
}

/// Leading constant `a_k^C` of the complex asymptotic.
pub fn complex_a_coefficient(k: u32) -> f64 {
    let kf = f64::from(k);
    let mut ln_num = 0.0;
    for i in 1..=(k + 1) {
        ln_num += log_gamma_unchecked(f64::from(i));
    }
    let ln_den = 0.5 * kf * (2.0 * std::f64::consts::PI).ln()
        + (kf * (kf + 1.0) - 0.5) * (kf + 1.0).ln();
    (ln_num - ln_den).exp()
}

/// Exponential base `b_k^C = (k+1)^(k+1)` of the complex asymptotic.
pub fn complex_b_coefficient(k: u32) -> f64 {
    f64::from(k + 1).powi(k as i32 + 1)
}

/// `ln( a_k^C (b_k^C)^n n^(-k(k+2)/2) )`.
pub fn ln_delta_complex_asymptotic(k: u32, n: u32) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(Error::Domain(format!(
            "complex asymptotic requires 0 < k < n, got k = {k}, n = {n}"
        )));
    }
    let kf = f64::from(k);
    let nf = f64::from(n);
    Ok(complex_a_coefficient(k).ln() + nf * complex_b_coefficient(k).ln()
        - 0.5 * kf * (kf + 2.0) * nf.ln())
}

/// Leading-order value of `delta_complex(k, n)` for large `n`.
pub fn delta_complex_asymptotic(k: u32, n: u32) -> Result<f64> {
    Ok(ln_delta_complex_asymptotic(k, n)?.exp())
}
