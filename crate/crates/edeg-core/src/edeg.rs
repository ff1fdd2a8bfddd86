//! Assembly of the expected degree `delta_{k,n}` of the real Grassmannian.
//!
//! Three independent deterministic routes are implemented for `k = 1`, and
//! they must agree:
//!
//! * line integral — `delta_{1,n} = c(n) ∫_0^1 (FG)^(n-3) (G²-F²) (F'G - FG') du`
//!   with the elliptic integrals `F`, `G` and their analytic `u`-derivatives
//!   (differentiation under the integral sign). This is the overflow-free
//!   rewriting of `-2 c(n) ∫ L^(n-1) sinh(w) w' du`, `L = FG`, `w = log(F/G)`:
//!   `L^(n-1) sinh(w) = (FG)^(n-2) (F² - G²) / 2`.
//! * theta integral — the same quantity in the `t`-parametrization
//!   `π^(2n-2) c(n) ∫_0^(π/4) (pq)^(n-3) (q²-p²) (p'q - pq') dt` where
//!   `p = h_y(cos t, sin t)` and `q = h_x(cos t, sin t)` come from the
//!   support-function quadratures (second derivatives of `h` supply `p'`,
//!   `q'`), not from the elliptic integrals.
//! * zonoid quadrature — `delta_{k,n} = beta_{k,n} I_k(n)` with
//!   `I_k(n) = ∫_{S^k_+} (p_k r^(k+1))^(n-k) q_k dS` evaluated through the
//!   Newton-inverted radial function (`k = 1, 2`).
//!
//! The Monte Carlo route (four random lines in RP³) lives in
//! [`crate::mc_schubert`] and anchors the `(k, n) = (1, 3)` value.

use crate::asymptotics::{
    self, lambda::lambda, DEFAULT_LAMBDA_MC_SAMPLES, DEFAULT_LAMBDA_MC_SEED,
};
use crate::complex_degree::schubert_c;
use crate::error::{Error, Result};
use crate::mc_schubert;
use crate::numerics::gamma::log_gamma_unchecked;
use crate::numerics::quad::{
    adaptive_quad, adaptive_quad_relaxed, gauss_legendre, QuadratureEstimate,
};
use crate::zonoid::{chamber_exit_distance, mu, radial_maximum, Direction, ZonoidModel};
use std::f64::consts::PI;
use std::str::FromStr;

mod elliptic;

const KERNEL_TOL: f64 = 1e-12;

/// Evaluation route of a `delta_{k,n}` value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    LineIntegral,
    ThetaIntegral,
    ZonoidQuadrature,
    Asymptotic,
    MonteCarlo,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::LineIntegral => "line-integral",
            Method::ThetaIntegral => "theta-integral",
            Method::ZonoidQuadrature => "zonoid-quadrature",
            Method::Asymptotic => "asymptotic",
            Method::MonteCarlo => "monte-carlo",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "line-integral" => Ok(Method::LineIntegral),
            "theta-integral" => Ok(Method::ThetaIntegral),
            "zonoid-quadrature" => Ok(Method::ZonoidQuadrature),
            "asymptotic" => Ok(Method::Asymptotic),
            "monte-carlo" => Ok(Method::MonteCarlo),
            other => Err(Error::Unsupported(format!(
                "unknown method '{other}' (expected line-integral | theta-integral | zonoid-quadrature | asymptotic | monte-carlo)"
            ))),
        }
    }
}

/// A `delta_{k,n}` value with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct EdegResult {
    pub value: f64,
    pub method: Method,
    /// Engine error estimate (quadrature bound or one Monte Carlo standard
    /// error); indicative `value/n` for the asymptotic method.
    pub error_bound: f64,
    pub k: u32,
    pub n: u32,
    pub tol: f64,
    pub seed: Option<u64>,
}

/// Adaptive quadrature over a fallible integrand; the first inner error
/// aborts the integration and is reported.
fn adaptive_quad_fallible<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut inner: Option<Error> = None;
    let q = adaptive_quad(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                inner.get_or_insert(e);
                f64::NAN
            }
        },
        a,
        b,
        tol,
    );
    if let Some(e) = inner {
        return Err(e);
    }
    q
}

// --- elliptic integrals ------------------------------------------------------

/// `F(u) = ∫_0^(π/2) u sin²θ / sqrt(cos²θ + u² sin²θ) dθ`, `u ∈ [0, 1]`;
/// `F(0)` is the limit `0`. Evaluated in closed form through the complete
/// elliptic integrals (AGM); the tests check the values against the
/// defining integrals.
pub fn f_elliptic(u: f64) -> Result<f64> {
    check_unit_interval(u, "f_elliptic")?;
    Ok(elliptic::fg_with_derivatives(u).0)
}

/// `G(u) = ∫_0^(π/2) sin²θ / sqrt(sin²θ + u² cos²θ) dθ`, `u ∈ [0, 1]`;
/// `G(0) = 1`.
pub fn g_elliptic(u: f64) -> Result<f64> {
    check_unit_interval(u, "g_elliptic")?;
    Ok(elliptic::fg_with_derivatives(u).1)
}

/// `F'(u) = ∫ sin²θ cos²θ / (cos²θ + u² sin²θ)^(3/2) dθ` (differentiation
/// under the integral sign; diverges like `ln(4/u)` as `u -> 0`).
pub fn f_elliptic_du(u: f64) -> Result<f64> {
    check_unit_interval(u, "f_elliptic_du")?;
    Ok(elliptic::fg_with_derivatives(u).2)
}

/// `G'(u) = -u ∫ sin²θ cos²θ / (sin²θ + u² cos²θ)^(3/2) dθ`.
pub fn g_elliptic_du(u: f64) -> Result<f64> {
    check_unit_interval(u, "g_elliptic_du")?;
    Ok(elliptic::fg_with_derivatives(u).3)
}

fn check_unit_interval(u: f64, what: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain(format!("{what} requires u in [0, 1], got {u}")));
    }
    Ok(())
}

/// `c(n) = Γ(2n-2) / (Γ(n) Γ(n-2))` as `f64`: exact integer ratio for
/// moderate `n`, log-gamma beyond.
pub fn schubert_c_f64(n: u32) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!("c(n) requires n >= 3, got {n}")));
    }
    if n <= 90 {
        Ok(schubert_c(n)?.to_f64())
    } else {
        let nf = f64::from(n);
        Ok((log_gamma_unchecked(2.0 * nf - 2.0)
            - log_gamma_unchecked(nf)
            - log_gamma_unchecked(nf - 2.0))
        .exp())
    }
}

// --- the three deterministic routes ------------------------------------------

/// Integrand of the line-integral route: `(FG)^(n-3) (G²-F²) (F'G - FG')`,
/// nonnegative on `(0, 1)` since `F <= G` and `F/G` is increasing.
fn line_integrand(n: u32, u: f64) -> Result<f64> {
    let (f, g, fp, gp) = elliptic::fg_with_derivatives(u);
    Ok((f * g).powi(n as i32 - 3) * (g * g - f * f) * (fp * g - f * gp))
}

/// `delta_{1,n}` through the one-dimensional elliptic line integral.
pub fn delta1_line_integral(n: u32, tol: f64) -> Result<EdegResult> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "delta1_line_integral requires n >= 3, got {n}"
        )));
    }
    let c = schubert_c_f64(n)?;
    let q = adaptive_quad_fallible(|u| line_integrand(n, u), 0.0, 1.0, tol)?;
    Ok(EdegResult {
        value: c * q.value,
        method: Method::LineIntegral,
        error_bound: c * q.error_bound,
        k: 1,
        n,
        tol,
        seed: None,
    })
}

/// Support-function data on the unit circle: `p = h_y`, `q = h_x` and their
/// `t`-derivatives at `(cos t, sin t)`, all by quadrature on the reduced
/// `k = 1` kernel `h(x, y) = (1/π) ∫ sqrt(x² cos²θ + y² sin²θ) dθ`.
///
/// Three kernel integrals suffice: with `J = ∫ sin²θ cos²θ / D³ dθ` the
/// second partials combine on the unit circle to `p' = x J / π` and
/// `q' = -y J / π`. The kernels spike near a vanishing coordinate; their
/// tolerance is loosened in proportion to that coordinate because the
/// results re-enter scaled by it.
fn h_partials_k1(t: f64) -> Result<(f64, f64, f64, f64)> {
    let (y, x) = t.sin_cos();
    let quad = |f: &mut dyn FnMut(f64, f64, f64) -> f64, scale: f64| -> Result<f64> {
        let tol = (KERNEL_TOL / scale.max(KERNEL_TOL)).clamp(KERNEL_TOL, 1e-7);
        Ok(adaptive_quad_relaxed(
            |th: f64| {
                let (s, c) = th.sin_cos();
                let d = (x * x * c * c + y * y * s * s).sqrt();
                f(s, c, d)
            },
            0.0,
            0.5 * PI,
            tol,
            1e-6,
        )? / PI)
    };
    let q = x * quad(&mut |_s, c, d| c * c / d, x)?;
    let p = y * quad(&mut |s, _c, d| s * s / d, y)?;
    let j = quad(&mut |s, c, d| s * s * c * c / (d * d * d), x.min(y))?;
    Ok((p, q, x * j, -y * j))
}

/// `delta_{1,n}` through the `t`-parametrized theta integral on `[0, π/4]`.
pub fn delta1_theta_integral(n: u32, tol: f64) -> Result<EdegResult> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "delta1_theta_integral requires n >= 3, got {n}"
        )));
    }
    let ln_pref = (2.0 * f64::from(n) - 2.0) * PI.ln() + schubert_c_f64(n)?.ln();
    let pref = ln_pref.exp();
    let q = adaptive_quad_fallible(
        |t| {
            let (p, qv, pp, qp) = h_partials_k1(t)?;
            Ok((p * qv).powi(n as i32 - 3) * (qv * qv - p * p) * (pp * qv - p * qp))
        },
        0.0,
        0.25 * PI,
        tol,
    )?;
    Ok(EdegResult {
        value: pref * q.value,
        method: Method::ThetaIntegral,
        error_bound: pref * q.error_bound,
        k: 1,
        n,
        tol,
        seed: None,
    })
}

/// Log-volume of the real Grassmannian `G(k, n)` in the Pluecker metric:
/// `ln |G| = (k+1)(n-k)/2 ln π + Σ_{i=1}^{k+1} [ln Γ(i/2) - ln Γ((n-k+i)/2)]`.
pub fn grassmannian_log_volume(k: u32, n: u32) -> Result<f64> {
    if k >= n {
        return Err(Error::Domain(format!(
            "grassmannian_log_volume requires 0 <= k < n, got k = {k}, n = {n}"
        )));
    }
    let mut ln = 0.5 * f64::from(k + 1) * f64::from(n - k) * PI.ln();
    for i in 1..=(k + 1) {
        ln += log_gamma_unchecked(0.5 * f64::from(i))
            - log_gamma_unchecked(0.5 * f64::from(n - k + i));
    }
    Ok(ln)
}

/// `I_k(n) = ∫_{S^k_+} (p_k r^(k+1))^(n-k) q_k dS^k` by quadrature over the
/// Newton-inverted radial function; `k ∈ {1, 2}`, `n >= 2k+1`.
pub fn ik_quadrature(k: u32, n: u32, tol: f64) -> Result<QuadratureEstimate> {
    if n < 2 * k + 1 {
        return Err(Error::Domain(format!(
            "ik_quadrature requires n >= 2k+1, got k = {k}, n = {n}"
        )));
    }
    match k {
        1 => ik1_quadrature(n, tol),
        2 => ik2_quadrature(n),
        _ => Err(Error::Unsupported(format!(
            "ik_quadrature supports k = 1 or 2, got {k}"
        ))),
    }
}

/// One-dimensional form for `k = 1` over `θ ∈ [0, π/4]`: the integrand
/// `(cosθ sinθ)^(n-1) r^(2(n-1)) (cos²θ - sin²θ) / (cosθ sinθ)²` is
/// rewritten as `(cosθ sinθ)^(n-3) r^(2(n-1)) cos(2θ)` to avoid the
/// 0-over-0 at the boundary. The lower limit is shaved by the boundary
/// tolerance of the radial solver; the integrand there is bounded, so the
/// truncation is far below the quadrature tolerance.
fn ik1_quadrature(n: u32, tol: f64) -> Result<QuadratureEstimate> {
    let model = ZonoidModel::new(1)?;
    let theta_min = 1.1e-8f64.asin();
    adaptive_quad_fallible(
        |theta| {
            let (s, c) = theta.sin_cos();
            let u = Direction::new(vec![c, s])?;
            let r = model.radial(&u)?;
            Ok((c * s).powi(n as i32 - 3) * r.powi(2 * (n as i32 - 1)) * (2.0 * theta).cos())
        },
        theta_min,
        0.25 * PI,
        tol,
    )
}

/// Two-dimensional form for `k = 2` in geodesic polar coordinates at `μ`:
/// angle over the ordered chamber arc, radius up to the exact cell boundary
/// for that angle, fixed Gauss grid. The integrand is rearranged as
/// `(x₁x₂x₃)^(n-5) Π (x_i² - x_j²) r^(3(n-2)) sin ρ` so the `q_k` pole at
/// the orthant boundary cancels analytically.
fn ik2_quadrature(n: u32) -> Result<QuadratureEstimate> {
    let model = ZonoidModel::new(2)?;
    let coarse = ik2_fixed(&model, n, 48, 48)?;
    let fine = ik2_fixed(&model, n, 96, 96)?;
    Ok(QuadratureEstimate {
        value: fine,
        error_bound: (fine - coarse).abs().max(f64::EPSILON * fine.abs()),
        evaluations: 96 * 96 + 48 * 48,
    })
}

fn ik2_fixed(model: &ZonoidModel, n: u32, n_ang: usize, n_rad: usize) -> Result<f64> {
    // Orthonormal tangent frame at μ whose chamber {w1 >= w2 >= w3} is the
    // arc α ∈ [-π/6, π/6].
    let t1 = [1.0 / 2.0f64.sqrt(), 0.0, -1.0 / 2.0f64.sqrt()];
    let t2 = [1.0 / 6.0f64.sqrt(), -2.0 / 6.0f64.sqrt(), 1.0 / 6.0f64.sqrt()];
    let mu3 = mu(2);
    let ang_rule = gauss_legendre(n_ang);
    let rad_rule = gauss_legendre(n_rad);
    let power = n as i32 - 5;

    let mut total = 0.0;
    for (alpha, w_ang) in ang_rule.mapped(-PI / 6.0, PI / 6.0) {
        let (sa, ca) = alpha.sin_cos();
        let w: Vec<f64> = (0..3).map(|i| ca * t1[i] + sa * t2[i]).collect();
        let l = chamber_exit_distance(2, &w) - 1e-8;
        let mut radial_sum = 0.0;
        for (rho, w_rad) in rad_rule.mapped(0.0, l) {
            let (sr, cr) = rho.sin_cos();
            let x: Vec<f64> = (0..3).map(|i| cr * mu3[i] + sr * w[i]).collect();
            let u = Direction::new(x.clone())?;
            let r = model.radial(&u)?;
            let p3 = x[0] * x[1] * x[2];
            let vander = (x[0] * x[0] - x[1] * x[1])
                * (x[0] * x[0] - x[2] * x[2])
                * (x[1] * x[1] - x[2] * x[2]);
            radial_sum += w_rad * p3.powi(power) * vander * r.powi(3 * (n as i32 - 2)) * sr;
        }
        total += w_ang * radial_sum;
    }
    Ok(total)
}

/// Closed-form Laplace asymptotic of `I_k(n)` with an explicit `Λ_k`:
///
/// ```text
/// I_k(n) ~ Λ_k 2^((K-k)/2) (k+1)^(((k+1)²-K+1)/2) (k+2)^(-(K+k)/2)
///          (R/sqrt(k+1))^((k+1)(n-k)) n^(-(K+k)/2),   K = k(k+1)/2,
/// ```
///
/// normalized so that `delta_asym(k,n) = beta_asym(k,n) * ik_asymptotic(k,n)`
/// holds as an identity (the tests pin it at 1e-10).
pub fn ik_asymptotic_with_lambda(k: u32, n: u32, lambda_k: f64) -> Result<f64> {
    if k < 1 || n <= k {
        return Err(Error::Domain(format!(
            "ik_asymptotic requires k >= 1 and n > k, got k = {k}, n = {n}"
        )));
    }
    let kf = f64::from(k);
    let nf = f64::from(n);
    let big_k = 0.5 * kf * (kf + 1.0);
    let r = radial_maximum(k as usize);
    let ln = lambda_k.ln()
        + 0.5 * (big_k - kf) * 2.0f64.ln()
        + 0.5 * ((kf + 1.0) * (kf + 1.0) - big_k + 1.0) * (kf + 1.0).ln()
        - 0.5 * (big_k + kf) * (kf + 2.0).ln()
        + (kf + 1.0) * (nf - kf) * (r.ln() - 0.5 * (kf + 1.0).ln())
        - 0.5 * (big_k + kf) * nf.ln();
    Ok(ln.exp())
}

/// `ik_asymptotic` with `Λ_k` supplied by the closed form or the cached
/// Monte Carlo default.
pub fn ik_asymptotic(k: u32, n: u32) -> Result<f64> {
    let lam = lambda(k, DEFAULT_LAMBDA_MC_SAMPLES, DEFAULT_LAMBDA_MC_SEED)?;
    ik_asymptotic_with_lambda(k, n, lam)
}

/// Default Monte Carlo plan for `delta_real(..., Method::MonteCarlo, ..)`.
pub const DEFAULT_MC_TRIALS: u64 = 1_000_000;
pub const DEFAULT_MC_SEED: u64 = 0x00C0_FFEE;

/// Computes `delta_{k,n}` by the requested method.
///
/// Supported combinations: `k = 0` with any method (the value is exactly 1);
/// `k = 1, n >= 3` with the line, theta, or zonoid routes; `(k, n) = (1, 3)`
/// with Monte Carlo; `k = 2, n >= 5` with the zonoid route; `k <= 4` with
/// the asymptotic predictor.
pub fn delta_real(
    k: u32,
    n: u32,
    method: Method,
    tol: f64,
    mc: Option<(u64, u64)>,
) -> Result<EdegResult> {
    if n == 0 || k >= n {
        return Err(Error::Domain(format!(
            "delta_real requires 0 <= k < n, got k = {k}, n = {n}"
        )));
    }
    if k == 0 {
        return Ok(EdegResult {
            value: 1.0,
            method,
            error_bound: 0.0,
            k,
            n,
            tol,
            seed: None,
        });
    }
    match method {
        Method::LineIntegral if k == 1 && n >= 3 => delta1_line_integral(n, tol),
        Method::ThetaIntegral if k == 1 && n >= 3 => delta1_theta_integral(n, tol),
        Method::ZonoidQuadrature if (k == 1 || k == 2) && n > 2 * k => {
            let iq = ik_quadrature(k, n, tol)?;
            if iq.value.is_nan() || iq.value <= 0.0 {
                return Err(Error::Degenerate(format!(
                    "I_{k}({n}) quadrature returned a non-positive value {}",
                    iq.value
                )));
            }
            let ln_beta = asymptotics::ln_beta(k, n)?;
            let value = (ln_beta + iq.value.ln()).exp();
            Ok(EdegResult {
                value,
                method,
                error_bound: ln_beta.exp() * iq.error_bound,
                k,
                n,
                tol,
                seed: None,
            })
        }
        Method::Asymptotic if k <= 4 => {
            let value = asymptotics::delta_real_asymptotic(k, n)?;
            Ok(EdegResult {
                value,
                method,
                error_bound: value / f64::from(n),
                k,
                n,
                tol,
                seed: None,
            })
        }
        Method::MonteCarlo if k == 1 && n == 3 => {
            let (trials, seed) = mc.unwrap_or((DEFAULT_MC_TRIALS, DEFAULT_MC_SEED));
            let est = mc_schubert::estimate_delta13(trials, seed)?;
            Ok(EdegResult {
                value: est.estimate.mean,
                method,
                error_bound: est.estimate.std_error,
                k,
                n,
                tol,
                seed: Some(seed),
            })
        }
        _ => Err(Error::Unsupported(format!(
            "delta_real does not support (k = {k}, n = {n}, method = {method}); supported: \
             k=0 any method; k=1, n>=3: line-integral | theta-integral | zonoid-quadrature | asymptotic; \
             (k=1, n=3): monte-carlo; k=2, n>=5: zonoid-quadrature | asymptotic; k<=4: asymptotic"
        ))),
    }
}
