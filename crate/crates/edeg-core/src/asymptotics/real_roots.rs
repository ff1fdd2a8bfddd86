//! Membership test for the set of polynomials with all roots real.
//!
//! The polynomials are monic of degree `k+1` with no degree-`k` term and the
//! alternating sign convention
//!
//! ```text
//! p_a(X) = X^(k+1) + a_1 X^(k-1) - a_2 X^(k-2) + a_3 X^(k-3) - ...
//! ```
//!
//! so that `a_j` is the `(j+1)`-st elementary symmetric function of the
//! roots when the root sum is zero.
//!
//! For `k <= 2` the discriminant decides membership in closed form. For
//! higher degrees a Sturm chain counts distinct real roots; the chain is
//! first run in `f64`, and whenever a sign decision is not clearly resolved
//! the computation falls back to exact rational arithmetic on the (exactly
//! converted) input coefficients, so the classification is exact for the
//! given floating-point polynomial. Repeated-root boundaries (discriminant
//! zero, e.g. a nontrivial gcd with the derivative) are flagged.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Tolerance used for the discriminant boundary flag and for deciding that
/// an `f64` Sturm step is too ill-conditioned to trust.
const REL_TOL: f64 = 1e-12;

/// Monic polynomial `X^(k+1) + a_1 X^(k-1) - a_2 X^(k-2) + ... ± a_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicDepressedPolynomial {
    a: Vec<f64>,
}

impl MonicDepressedPolynomial {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Domain(
                "MonicDepressedPolynomial requires k >= 1 coefficients".into(),
            ));
        }
        if a.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("coefficients must be finite".into()));
        }
        Ok(MonicDepressedPolynomial { a })
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    pub fn degree(&self) -> usize {
        self.a.len() + 1
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// Coefficients in ascending degree order, length `k + 2`, leading 1.
    pub fn coefficients(&self) -> Vec<f64> {
        let k = self.k();
        let mut c = vec![0.0; k + 2];
        c[k + 1] = 1.0;
        for (idx, &ai) in self.a.iter().enumerate() {
            // a_{idx+1} multiplies X^(k-1-idx) with sign (-1)^idx.
            let sign = if idx % 2 == 0 { 1.0 } else { -1.0 };
            c[k - 1 - idx] = sign * ai;
        }
        c
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients()
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * x + c)
    }
}

/// Outcome of the all-roots-real membership test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealRootTest {
    /// True iff every complex root is real (with multiplicity).
    pub all_real: bool,
    /// True when the polynomial sits on the repeated-root boundary
    /// (discriminant zero within tolerance / nontrivial gcd with p').
    pub boundary: bool,
}

/// True iff every root of `p` is real.
pub fn all_roots_real(p: &MonicDepressedPolynomial) -> bool {
    classify_real_roots(p).all_real
}

/// Full classification with the boundary flag.
pub fn classify_real_roots(p: &MonicDepressedPolynomial) -> RealRootTest {
    match p.k() {
        1 => {
            // X^2 + a1: real roots iff a1 <= 0; discriminant -4 a1.
            let a1 = p.a[0];
            let boundary = a1.abs() <= REL_TOL;
            RealRootTest {
                all_real: a1 <= 0.0 || boundary,
                boundary,
            }
        }
        2 => {
            // X^3 + a1 X - a2: discriminant -4 a1^3 - 27 a2^2.
            let (a1, a2) = (p.a[0], p.a[1]);
            let disc = -4.0 * a1.powi(3) - 27.0 * a2 * a2;
            let scale = 4.0 * a1.abs().powi(3) + 27.0 * a2 * a2;
            let boundary = disc.abs() <= REL_TOL * scale.max(f64::MIN_POSITIVE);
            RealRootTest {
                all_real: disc > 0.0 || boundary,
                boundary,
            }
        }
        _ => {
            let coeffs = p.coefficients();
            match sturm_all_real_f64(&coeffs) {
                Some(result) => result,
                None => sturm_all_real_exact(&coeffs),
            }
        }
    }
}

// --- f64 Sturm chain with an "uncertain" escape hatch -----------------------

fn trim_f64(mut c: Vec<f64>, scale: f64) -> Option<Vec<f64>> {
    while let Some(&last) = c.last() {
        if last == 0.0 {
            c.pop();
        } else if last.abs() <= REL_TOL * scale {
            // A coefficient that is tiny relative to the working scale but
            // not exactly zero: the degree decision is untrustworthy.
            return None;
        } else {
            break;
        }
    }
    Some(c)
}

/// Remainder of `num / den`, both ascending, `den` nonempty trimmed.
fn poly_rem_f64(num: &[f64], den: &[f64], scale: f64) -> Option<Vec<f64>> {
    let mut r = num.to_vec();
    let dlead = *den.last().expect("trimmed divisor");
    while r.len() >= den.len() {
        let shift = r.len() - den.len();
        let q = r.last().expect("nonempty") / dlead;
        for (i, &dc) in den.iter().enumerate() {
            r[shift + i] -= q * dc;
        }
        r.pop();
        r = trim_f64(r, scale)?;
        if r.is_empty() {
            break;
        }
    }
    Some(r)
}

fn sign_variations(signs_at_minus_inf: &[i8], signs_at_plus_inf: &[i8]) -> i64 {
    let count = |signs: &[i8]| -> i64 {
        let mut v = 0;
        let mut prev = 0i8;
        for &s in signs {
            if s == 0 {
                continue;
            }
            if prev != 0 && s != prev {
                v += 1;
            }
            prev = s;
        }
        v
    };
    count(signs_at_minus_inf) - count(signs_at_plus_inf)
}

fn sturm_all_real_f64(coeffs: &[f64]) -> Option<RealRootTest> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let p0 = trim_f64(coeffs.to_vec(), scale)?;
    let degree = p0.len() - 1;
    let p1: Vec<f64> = p0
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as f64)
        .collect();
    let p1 = trim_f64(p1, scale)?;

    let mut chain = vec![p0, p1];
    loop {
        let n = chain.len();
        let rem = poly_rem_f64(&chain[n - 2], &chain[n - 1], scale)?;
        if rem.is_empty() {
            break;
        }
        // Normalize scale and negate, both sign-safe for Sturm counting
        // (positive rescaling only).
        let m = rem.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
        chain.push(rem.iter().map(|c| -c / m).collect());
        if chain.len() > degree + 2 {
            return None;
        }
    }

    let gcd_degree = chain.last().expect("chain nonempty").len() - 1;
    let minus: Vec<i8> = chain
        .iter()
        .map(|p| {
            let lc = *p.last().expect("trimmed");
            let d = p.len() - 1;
            let s = if lc > 0.0 { 1i8 } else { -1i8 };
            if d % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .collect();
    let plus: Vec<i8> = chain
        .iter()
        .map(|p| if *p.last().expect("trimmed") > 0.0 { 1 } else { -1 })
        .collect();
    let distinct = sign_variations(&minus, &plus);
    Some(RealRootTest {
        all_real: distinct == (degree - gcd_degree) as i64,
        boundary: gcd_degree > 0,
    })
}

// --- exact Sturm chain over the rationals -----------------------------------

fn to_rational(coeffs: &[f64]) -> Vec<BigRational> {
    coeffs
        .iter()
        .map(|&c| BigRational::from_float(c).expect("finite coefficient"))
        .collect()
}

fn trim_exact(c: &mut Vec<BigRational>) {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
}

fn poly_rem_exact(num: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
    let mut r = num.to_vec();
    let dlead = den.last().expect("nonzero divisor").clone();
    while r.len() >= den.len() {
        let shift = r.len() - den.len();
        let q = r.last().expect("nonempty") / &dlead;
        for (i, dc) in den.iter().enumerate() {
            let delta = &q * dc;
            r[shift + i] -= delta;
        }
        r.pop();
        trim_exact(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn sturm_all_real_exact(coeffs: &[f64]) -> RealRootTest {
    let mut p0 = to_rational(coeffs);
    trim_exact(&mut p0);
    let degree = p0.len() - 1;
    let mut p1: Vec<BigRational> = p0
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim_exact(&mut p1);

    let mut chain = vec![p0, p1];
    loop {
        let n = chain.len();
        let mut rem = poly_rem_exact(&chain[n - 2], &chain[n - 1]);
        if rem.is_empty() {
            break;
        }
        // Rescale to keep the numbers small; positive factor only.
        let m = rem
            .iter()
            .map(|c| c.abs())
            .max()
            .expect("nonempty remainder");
        for c in &mut rem {
            let scaled = -(&*c / &m);
            *c = scaled;
        }
        chain.push(rem);
    }

    let gcd_degree = chain.last().expect("chain nonempty").len() - 1;
    let sign_of = |c: &BigRational| -> i8 {
        if c.is_zero() {
            0
        } else if c.is_positive() {
            1
        } else {
            -1
        }
    };
    let minus: Vec<i8> = chain
        .iter()
        .map(|p| {
            let s = sign_of(p.last().expect("trimmed"));
            if (p.len() - 1) % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .collect();
    let plus: Vec<i8> = chain
        .iter()
        .map(|p| sign_of(p.last().expect("trimmed")))
        .collect();
    let distinct = sign_variations(&minus, &plus);
    RealRootTest {
        all_real: distinct == (degree - gcd_degree) as i64,
        boundary: gcd_degree > 0,
    }
}
