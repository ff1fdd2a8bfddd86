//! Closed-form evaluation of the two elliptic integrals behind the
//! `delta_{1,n}` line integral,
//!
//! ```text
//! F(u) = ∫_0^(π/2) u sin²θ / sqrt(cos²θ + u² sin²θ) dθ,
//! G(u) = ∫_0^(π/2)   sin²θ / sqrt(sin²θ + u² cos²θ) dθ,
//! ```
//!
//! through the Legendre reduction with parameter `m = 1 - u²`:
//!
//! ```text
//! F(u) = u (K(m) - E(m)) / m,      G(u) = (E(m) - u² K(m)) / m,
//! ```
//!
//! with `K`, `E` computed by the arithmetic-geometric mean. The difference
//! `K - E = K Σ 2^(n-1) c_n²` is accumulated as a positive sum over the AGM
//! correction terms, so no cancellation occurs even for `m -> 0`. Two
//! series branches cover the parameter ends: an ordinary Taylor series in
//! `m` near `u = 1`, and the `ln(4/u)` expansion near `u = 0`, where `K`
//! diverges logarithmically and the direct formulas for the derivatives
//! lose all precision.

use std::f64::consts::PI;

/// `K`, `E` and the cancellation-free combination `W = (K - E)/m`.
#[derive(Debug, Clone, Copy)]
struct Complete {
    k: f64,
    e: f64,
    w: f64,
}

/// AGM evaluation at `m = 1 - u²`, for `u` away from both endpoints.
fn complete_agm(u: f64) -> Complete {
    let m = (1.0 - u) * (1.0 + u);
    let mut a = 1.0f64;
    let mut b = u;
    // d_n = a_n - b_n, updated as d² / (2 (sqrt(a) + sqrt(b))²) to avoid
    // subtracting nearly equal numbers.
    let mut d = 1.0 - u;
    // S = Σ 2^(n-1) c_n², c_0² = m, c_(n+1) = d_n / 2.
    let mut s = 0.5 * m;
    let mut pow = 1.0f64;
    for _ in 0..64 {
        let c = 0.5 * d;
        s += pow * c * c;
        let root = (a.sqrt() + b.sqrt()).powi(2);
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        d = d * d / (2.0 * root);
        a = an;
        b = bn;
        pow *= 2.0;
        if d < 1e-17 * a {
            break;
        }
    }
    let k = 0.5 * PI / a;
    let e = k * (1.0 - s);
    Complete { k, e, w: k * s / m }
}

/// Series in `m = 1 - u²` for `u` near 1 (`m <= 1e-4`); the AGM combination
/// `(E - 2u²W)/m` used by `F'` cancels there.
fn near_one(u: f64) -> (f64, f64, f64, f64) {
    let m = (1.0 - u) * (1.0 + u);
    let k = 0.5
        * PI
        * (1.0 + m * (0.25 + m * (9.0 / 64.0 + m * (25.0 / 256.0 + m * 1225.0 / 16384.0))));
    let w = 0.5
        * PI
        * (0.5 + m * (3.0 / 16.0 + m * (15.0 / 128.0 + m * (175.0 / 2048.0 + m * 2205.0 / 32768.0))));
    let w_prime = 0.5
        * PI
        * (3.0 / 16.0 + m * (15.0 / 64.0 + m * (525.0 / 2048.0 + m * 2205.0 / 8192.0)));
    let f = u * w;
    let g = k - w;
    let f_prime = w - 2.0 * u * u * w_prime;
    let g_prime = -g / u + 2.0 * u * w_prime;
    (f, g, f_prime, g_prime)
}

/// Logarithmic series for `u <= 1e-4`: with `L = ln(4/u)`,
///
/// ```text
/// F  = u(L-1) + u³(3L/4 - 1) + O(u⁵L)
/// G  = 1 + u²(3/4 - L/2) + u⁴(35/48 - 9L/16) + O(u⁶L)
/// F' = (L-2) + u²(9L/4 - 15/4) + O(u⁴L)
/// G' = u(2-L) + u³(35/12 + 9/16 - 9L/4) + O(u⁵L)
/// ```
fn near_zero(u: f64) -> (f64, f64, f64, f64) {
    let l = (4.0 / u).ln();
    let u2 = u * u;
    let f = u * (l - 1.0) + u * u2 * (0.75 * l - 1.0);
    let g = 1.0 + u2 * (0.75 - 0.5 * l) + u2 * u2 * (35.0 / 48.0 - 9.0 / 16.0 * l);
    let f_prime = (l - 2.0) + u2 * (2.25 * l - 3.75);
    let g_prime = u * (2.0 - l) + u * u2 * (35.0 / 12.0 + 9.0 / 16.0 - 2.25 * l);
    (f, g, f_prime, g_prime)
}

/// `(F, G, F', G')` at `u ∈ [0, 1]`; `F(0)` and the derivatives at the
/// endpoints are the appropriate limits (`F'` diverges like `ln(4/u)` and is
/// returned as such for `u > 0`; `F'(0)` is reported as infinity).
pub(crate) fn fg_with_derivatives(u: f64) -> (f64, f64, f64, f64) {
    if u == 0.0 {
        return (0.0, 1.0, f64::INFINITY, 0.0);
    }
    if u <= 1e-4 {
        return near_zero(u);
    }
    if u >= (1.0f64 - 1e-4).sqrt() {
        if u >= 1.0 {
            // m = 0: W = π/4, W' = 3π/32, so F = G = π/4, F' = π/16,
            // G' = -π/16.
            let w = 0.25 * PI;
            let w_prime = 0.5 * PI * 3.0 / 16.0;
            return (
                0.25 * PI,
                0.25 * PI,
                w - 2.0 * w_prime,
                -0.25 * PI + 2.0 * w_prime,
            );
        }
        return near_one(u);
    }
    let c = complete_agm(u);
    let m = (1.0 - u) * (1.0 + u);
    let f = u * c.w;
    let g = c.k - c.w;
    let w_prime = (0.5 * c.e / (u * u) - c.w) / m;
    let f_prime = c.w - 2.0 * u * u * w_prime;
    let g_prime = -g / u + 2.0 * u * w_prime;
    (f, g, f_prime, g_prime)
}
