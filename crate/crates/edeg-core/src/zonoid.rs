//! Geometry of the singular-value convex body behind the Segre zonoid.
//!
//! The body `D(k)` in `R^(k+1)` is described by its support function
//!
//! ```text
//! h(x) = (2π)^(-(k+2)/2) ∫_{R^(k+1)} sqrt(x_1² ξ_1² + ... + x_{k+1}² ξ_{k+1}²) e^(-|ξ|²/2) dξ
//!      = 2^k π^(-(k+2)/2) Γ((k+2)/2) ∫_{S^k_pos} sqrt(Σ x_j² ξ_j²) dS(ξ),
//! ```
//!
//! where `S^k_pos` is the positive-orthant part of the sphere. Everything
//! else is derived from `h`:
//!
//! * `∇h(x)` points to the boundary point supported in direction `x`;
//! * `ψ = ∇h / |∇h|` sends a normal direction to the radial direction of
//!   that boundary point, and fixes `μ = (1,...,1)/sqrt(k+1)`;
//! * the radial function is `r(u) = |∇h(ψ⁻¹(u))|`, with `ψ⁻¹` computed by a
//!   damped Newton iteration on the sphere.
//!
//! Two radial normalizations float around in the source formulas, so the
//! model calibrates once at construction: it computes `|∇h(μ)|` by
//! quadrature and stores `s_k = R / |∇h(μ)|` with `R` the closed-form
//! radial maximum. With the support normalization above, `|∇h(μ)| = R`
//! exactly and `s_k` comes out as `1` up to quadrature error; the scale is
//! kept explicit (and reported) rather than silently assumed.

use crate::error::{Error, Result};
use crate::numerics::gamma::log_gamma_unchecked;
use crate::numerics::quad::{adaptive_quad, adaptive_quad_relaxed, gauss_legendre};
use std::f64::consts::PI;

/// Inputs closer than this to the boundary of the positive orthant are
/// refused by `radial`; the Gauss map degenerates where coordinates vanish.
pub const BOUNDARY_TOL: f64 = 1e-8;

const NEWTON_RESIDUAL_TOL: f64 = 1e-12;
const NEWTON_MAX_ITERS: usize = 100;
const JACOBIAN_FD_STEP: f64 = 1e-6;

/// Unit vector in `R^(k+1)`; renormalized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    x: Vec<f64>,
}

impl Direction {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Domain("Direction needs at least 2 coordinates".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("Direction coordinates must be finite".into()));
        }
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::Domain("Direction cannot be the zero vector".into()));
        }
        let x = coords.into_iter().map(|c| c / norm).collect();
        Ok(Direction { x })
    }

    /// The symmetric direction `(1, ..., 1)/sqrt(k+1)`.
    pub fn mu(k: usize) -> Self {
        Direction {
            x: mu(k),
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.x
    }

    pub fn k(&self) -> usize {
        self.x.len() - 1
    }

    pub fn min_coord(&self) -> f64 {
        self.x.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `(1, ..., 1)/sqrt(k+1)` as a plain vector.
pub fn mu(k: usize) -> Vec<f64> {
    vec![1.0 / ((k + 1) as f64).sqrt(); k + 1]
}

/// Helmert orthonormal basis of the zero-sum hyperplane `μ^⊥` in `R^(k+1)`:
/// `v_j = (1, ..., 1, -j, 0, ..., 0) / sqrt(j(j+1))` with `j` leading ones.
pub fn mu_perp_basis(k: usize) -> Vec<Vec<f64>> {
    (1..=k)
        .map(|j| {
            let s = 1.0 / ((j * (j + 1)) as f64).sqrt();
            let mut v = vec![0.0; k + 1];
            for vi in v.iter_mut().take(j) {
                *vi = s;
            }
            v[j] = -(j as f64) * s;
            v
        })
        .collect()
}

/// Closed-form maximum of the radial function,
/// `R = Γ((k+2)/2) / (sqrt(π) sqrt(k+1) Γ((k+1)/2))`, attained at `μ`.
pub fn radial_maximum(k: usize) -> f64 {
    let kf = k as f64;
    (log_gamma_unchecked(0.5 * (kf + 2.0)) - log_gamma_unchecked(0.5 * (kf + 1.0))
        - 0.5 * PI.ln()
        - 0.5 * (kf + 1.0).ln())
    .exp()
}

/// Moment `G(m) = ∫_{S^k_pos} ξ_1^m dS = π^(k/2) 2^(-k) Γ((m+1)/2) / Γ((k+m+1)/2)`.
pub fn sphere_moment(k: usize, m: u32) -> f64 {
    let kf = k as f64;
    let mf = f64::from(m);
    (0.5 * kf * PI.ln() - kf * 2.0f64.ln() + log_gamma_unchecked(0.5 * (mf + 1.0))
        - log_gamma_unchecked(0.5 * (kf + mf + 1.0)))
    .exp()
}

/// Geodesic inradius of the ordered positive cell at `μ`: `arctan(1/sqrt(k))`.
pub fn inradius(k: usize) -> f64 {
    (1.0 / (k as f64).sqrt()).atan()
}

/// Exit time from the ordered positive cell starting at `μ` with unit
/// tangent `w` in the closed chamber `w_1 >= ... >= w_{k+1}` (so that the
/// only constraint met along the geodesic is `x_{k+1} = 0`).
pub fn chamber_exit_distance(k: usize, w: &[f64]) -> f64 {
    let last = w[k];
    if last >= -1e-15 {
        return 0.5 * PI;
    }
    (1.0 / (((k + 1) as f64).sqrt() * (-last))).atan()
}

// --- tensor-product quadrature over the positive-orthant sphere -------------

/// Fixed product rule on `S^k_pos` in spherical angles; stores squared node
/// coordinates because both the support and gradient integrands only need
/// `ξ_i²`.
#[derive(Debug, Clone)]
struct SphereGrid {
    dim: usize,
    xi2: Vec<f64>,
    weights: Vec<f64>,
}

fn build_sphere_grid(k: usize, order: usize) -> SphereGrid {
    let rule = gauss_legendre(order);
    let angles: Vec<(f64, f64)> = rule.mapped(0.0, 0.5 * PI).collect();
    let mut grid = SphereGrid {
        dim: k + 1,
        xi2: Vec::new(),
        weights: Vec::new(),
    };
    // Recursive expansion of φ_1..φ_k with Jacobian Π sin^(k-j) φ_j.
    fn descend(
        k: usize,
        level: usize,
        sin_prod: f64,
        weight: f64,
        coords: &mut Vec<f64>,
        angles: &[(f64, f64)],
        grid: &mut SphereGrid,
    ) {
        if level == k {
            coords.push(sin_prod);
            for c in coords.iter() {
                grid.xi2.push(c * c);
            }
            grid.weights.push(weight);
            coords.pop();
            return;
        }
        for &(phi, w) in angles {
            let (s, c) = phi.sin_cos();
            let jac = s.powi((k - 1 - level) as i32);
            coords.push(sin_prod * c);
            descend(k, level + 1, sin_prod * s, weight * w * jac, coords, angles, grid);
            coords.pop();
        }
    }
    let mut coords = Vec::with_capacity(k + 1);
    descend(k, 0, 1.0, 1.0, &mut coords, &angles, &mut grid);
    grid
}

/// Quadrature value of `∫_{S^k_pos} ξ_1^m dS` on a fresh grid of the given
/// order, used to cross-check the closed form.
pub fn sphere_moment_quadrature(k: usize, m: u32, order: usize) -> f64 {
    mixed_moment_quadrature(k, &[(0, m)], order)
}

/// `∫_{S^k_pos} Π ξ_{i}^{m_i} dS` for the given `(coordinate, power)` pairs.
pub fn mixed_moment_quadrature(k: usize, powers: &[(usize, u32)], order: usize) -> f64 {
    let grid = build_sphere_grid(k, order);
    let d = grid.dim;
    let mut sum = 0.0;
    for (node, &w) in grid.xi2.chunks_exact(d).zip(&grid.weights) {
        let mut f = 1.0;
        for &(i, m) in powers {
            debug_assert!(m % 2 == 0, "stored coordinates are squared");
            f *= node[i].powi((m / 2) as i32);
        }
        sum += w * f;
    }
    sum
}

// --- the model ---------------------------------------------------------------

/// Immutable geometry engine for fixed `k`; all operations are re-entrant.
#[derive(Debug, Clone)]
pub struct ZonoidModel {
    k: usize,
    quad_tol: f64,
    prefactor: f64,
    grid: Option<SphereGrid>,
    grad_mu_norm: f64,
    radial_scale: f64,
}

impl ZonoidModel {
    /// Model with default tolerances (adaptive `1e-12` for `k = 1`; product
    /// rules of order 48 for `k = 2` and 64 for `k = 3`).
    pub fn new(k: usize) -> Result<Self> {
        let order = match k {
            2 => 48,
            _ => 64,
        };
        Self::with_params(k, 1e-12, order)
    }

    pub fn with_params(k: usize, quad_tol: f64, grid_order: usize) -> Result<Self> {
        if !(1..=3).contains(&k) {
            return Err(Error::Unsupported(format!(
                "ZonoidModel supports k in 1..=3, got {k}"
            )));
        }
        if quad_tol.is_nan() || quad_tol <= 0.0 || grid_order < 4 {
            return Err(Error::Domain(
                "ZonoidModel requires quad_tol > 0 and grid_order >= 4".into(),
            ));
        }
        let kf = k as f64;
        let prefactor = (kf * 2.0f64.ln() - 0.5 * (kf + 2.0) * PI.ln()
            + log_gamma_unchecked(0.5 * (kf + 2.0)))
        .exp();
        let grid = if k >= 2 {
            Some(build_sphere_grid(k, grid_order))
        } else {
            None
        };
        let mut model = ZonoidModel {
            k,
            quad_tol,
            prefactor,
            grid,
            grad_mu_norm: 1.0,
            radial_scale: 1.0,
        };
        let g = model.support_gradient(&mu(k))?;
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        model.grad_mu_norm = norm;
        model.radial_scale = radial_maximum(k) / norm;
        Ok(model)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn quad_tol(&self) -> f64 {
        self.quad_tol
    }

    /// `|∇h(μ)|` as computed by quadrature at construction.
    pub fn grad_mu_norm(&self) -> f64 {
        self.grad_mu_norm
    }

    /// Calibration scale `s_k = R / |∇h(μ)|`; equals `1` up to quadrature
    /// error in this normalization. A substantial deviation would signal an
    /// inconsistency between the support and radial normalizations and is
    /// surfaced by `calibration_deviation`.
    pub fn radial_scale(&self) -> f64 {
        self.radial_scale
    }

    /// `|s_k - 1|`, for reporting.
    pub fn calibration_deviation(&self) -> f64 {
        (self.radial_scale - 1.0).abs()
    }

    /// Closed-form radial maximum for this `k`.
    pub fn radial_max(&self) -> f64 {
        radial_maximum(self.k)
    }

    /// Spherical-integral prefactor `2^k π^(-(k+2)/2) Γ((k+2)/2)`.
    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.k + 1 {
            return Err(Error::Domain(format!(
                "expected a vector in R^{}, got length {}",
                self.k + 1,
                x.len()
            )));
        }
        if x.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("coordinates must be finite".into()));
        }
        Ok(())
    }

    /// Support function `h(x)`; 1-homogeneous, `x` need not be a unit vector.
    pub fn support(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        let integral = match &self.grid {
            None => {
                let (x0, x1) = (x[0], x[1]);
                adaptive_quad(
                    |t: f64| {
                        let (s, c) = t.sin_cos();
                        (x0 * x0 * c * c + x1 * x1 * s * s).sqrt()
                    },
                    0.0,
                    0.5 * PI,
                    self.quad_tol,
                )?
                .value
            }
            Some(grid) => {
                let d = grid.dim;
                let mut sum = 0.0;
                for (node, &w) in grid.xi2.chunks_exact(d).zip(&grid.weights) {
                    let s: f64 = node.iter().zip(x).map(|(&xi2, &xi)| xi * xi * xi2).sum();
                    sum += w * s.sqrt();
                }
                sum
            }
        };
        Ok(self.prefactor * integral)
    }

    /// Gradient `∇h(x)`, component `i` being
    /// `prefactor * x_i ∫ ξ_i² / sqrt(Σ x_j² ξ_j²) dS`.
    pub fn support_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        if x.iter().map(|c| c * c).sum::<f64>() < 1e-300 {
            return Err(Error::Domain("gradient undefined at the origin".into()));
        }
        match &self.grid {
            None => {
                // The component-i kernel spikes where |x_i| is small, and
                // its value re-enters multiplied by x_i: relax the relative
                // tolerance in proportion (capped at 1e-7) so the absolute
                // gradient accuracy stays at quad_tol scale.
                let norm = (x[0] * x[0] + x[1] * x[1]).sqrt();
                let (x0, x1) = (x[0], x[1]);
                let sq = move |t: f64| {
                    let (s, c) = t.sin_cos();
                    (x0 * x0 * c * c + x1 * x1 * s * s).sqrt()
                };
                let tol = |xi: f64| {
                    (self.quad_tol * norm / xi.abs().max(self.quad_tol * norm))
                        .clamp(self.quad_tol, 1e-7)
                };
                let g0 = adaptive_quad_relaxed(
                    |t: f64| {
                        let c = t.cos();
                        c * c / sq(t)
                    },
                    0.0,
                    0.5 * PI,
                    tol(x0),
                    1e-6,
                )?;
                let g1 = adaptive_quad_relaxed(
                    |t: f64| {
                        let s = t.sin();
                        s * s / sq(t)
                    },
                    0.0,
                    0.5 * PI,
                    tol(x1),
                    1e-6,
                )?;
                Ok(vec![self.prefactor * x0 * g0, self.prefactor * x1 * g1])
            }
            Some(grid) => {
                let d = grid.dim;
                let mut acc = vec![0.0f64; d];
                for (node, &w) in grid.xi2.chunks_exact(d).zip(&grid.weights) {
                    let s: f64 = node.iter().zip(x).map(|(&xi2, &xi)| xi * xi * xi2).sum();
                    let inv = w / s.sqrt();
                    for (a, &xi2) in acc.iter_mut().zip(node) {
                        *a += inv * xi2;
                    }
                }
                Ok(acc
                    .iter()
                    .zip(x)
                    .map(|(&a, &xi)| self.prefactor * xi * a)
                    .collect())
            }
        }
    }

    fn psi_raw(&self, y: &[f64]) -> Result<Vec<f64>> {
        let g = self.support_gradient(y)?;
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::Degenerate("gradient vanished".into()));
        }
        Ok(g.into_iter().map(|v| v / norm).collect())
    }

    /// Gauss-type map `ψ(x) = ∇h(x) / |∇h(x)|`.
    pub fn psi(&self, u: &Direction) -> Result<Direction> {
        Direction::new(self.psi_raw(u.coords())?)
    }

    /// Directional derivative of `ψ` at `at` along the unit tangent `w`
    /// (`w ⊥ at`), by a central geodesic difference with the given step.
    pub fn dpsi_directional(&self, at: &Direction, w: &[f64], step: f64) -> Result<Vec<f64>> {
        self.check_dim(w)?;
        let plus = geodesic_step(at.coords(), w, step);
        let minus = geodesic_step(at.coords(), w, -step);
        let gp = self.psi_raw(&plus)?;
        let gm = self.psi_raw(&minus)?;
        Ok(gp
            .iter()
            .zip(&gm)
            .map(|(&p, &m)| (p - m) / (2.0 * step))
            .collect())
    }

    /// Point `exp_μ(ρ w)` of the unit sphere for a unit tangent `w ⊥ μ`.
    pub fn exp_mu(&self, w: &[f64], rho: f64) -> Result<Direction> {
        self.check_dim(w)?;
        Ok(Direction {
            x: geodesic_step(&mu(self.k), w, rho),
        })
    }

    /// Central finite-difference derivative of `∇h ∘ exp_μ` at `0` along
    /// the unit tangent `w`. Its component along `μ` vanishes (the radial
    /// maximum), and its tangential part is `R (k+1)/(k+3) w`, the `ψ`
    /// eigenvalue scaled by `|∇h(μ)| = R`.
    pub fn grad_h_directional_derivative(&self, w: &[f64], step: f64) -> Result<Vec<f64>> {
        let plus = self.support_gradient(&geodesic_step(&mu(self.k), w, step))?;
        let minus = self.support_gradient(&geodesic_step(&mu(self.k), w, -step))?;
        Ok(plus
            .iter()
            .zip(&minus)
            .map(|(&p, &m)| (p - m) / (2.0 * step))
            .collect())
    }

    /// Second derivative of `r²` along the unit tangent `w` at `μ` in
    /// exponential coordinates, divided by `r(μ)²`. Five-point stencil;
    /// the exact value is `-4/(k+1)` independent of normalization.
    pub fn radial_sq_hessian_ratio(&self, w: &[f64], step: f64) -> Result<f64> {
        let f = |rho: f64| -> Result<f64> {
            let r = self.radial(&self.exp_mu(w, rho)?)?;
            Ok(r * r)
        };
        let stencil = -f(2.0 * step)? + 16.0 * f(step)? - 30.0 * f(0.0)? + 16.0 * f(-step)?
            - f(-2.0 * step)?;
        let second = stencil / (12.0 * step * step);
        let r_mu = self.radial(&Direction::mu(self.k))?;
        Ok(second / (r_mu * r_mu))
    }

    /// Solves `ψ(y) = u` by damped Newton iteration on the sphere starting
    /// at `y = u`, with a finite-difference Jacobian in tangent coordinates.
    pub fn psi_inverse(&self, u: &Direction) -> Result<Direction> {
        self.check_radial_domain(u)?;
        Ok(Direction {
            x: self.newton_invert(u.coords())?,
        })
    }

    fn check_radial_domain(&self, u: &Direction) -> Result<()> {
        if u.coords().len() != self.k + 1 {
            return Err(Error::Domain(format!(
                "expected a direction in R^{}",
                self.k + 1
            )));
        }
        if u.min_coord() < BOUNDARY_TOL {
            return Err(Error::Domain(format!(
                "direction within {BOUNDARY_TOL:.0e} of the positive-orthant boundary (min coordinate {:.3e})",
                u.min_coord()
            )));
        }
        Ok(())
    }

    /// Radial function `r(u) = s_k |∇h(ψ⁻¹(u))|` for `u` in the open
    /// positive orthant, at least `1e-8` from its boundary.
    pub fn radial(&self, u: &Direction) -> Result<f64> {
        self.check_radial_domain(u)?;
        let y = self.newton_invert(u.coords())?;
        let g = self.support_gradient(&y)?;
        Ok(self.radial_scale * g.iter().map(|v| v * v).sum::<f64>().sqrt())
    }

    fn newton_invert(&self, target: &[f64]) -> Result<Vec<f64>> {
        let k = self.k;
        let mut y = target.to_vec();
        let mut psi_y = self.psi_raw(&y)?;
        let mut res = dist(target, &psi_y);
        let mut iterations = 0usize;
        while iterations < NEWTON_MAX_ITERS {
            if res <= NEWTON_RESIDUAL_TOL {
                return Ok(y);
            }
            iterations += 1;
            let tangents = tangent_basis(&y);
            // Columns of Dψ in ambient coordinates by central differences.
            let mut cols: Vec<Vec<f64>> = Vec::with_capacity(k);
            for t in &tangents {
                let yp = retract(&y, t, JACOBIAN_FD_STEP);
                let ym = retract(&y, t, -JACOBIAN_FD_STEP);
                let gp = self.psi_raw(&yp)?;
                let gm = self.psi_raw(&ym)?;
                cols.push(
                    gp.iter()
                        .zip(&gm)
                        .map(|(&p, &m)| (p - m) / (2.0 * JACOBIAN_FD_STEP))
                        .collect(),
                );
            }
            let e: Vec<f64> = target.iter().zip(&psi_y).map(|(&t, &p)| t - p).collect();
            // Normal equations (JᵀJ) δ = Jᵀ e in tangent coordinates.
            let mut jtj = nalgebra::DMatrix::<f64>::zeros(k, k);
            let mut jte = nalgebra::DVector::<f64>::zeros(k);
            for i in 0..k {
                for j in 0..k {
                    jtj[(i, j)] = dot(&cols[i], &cols[j]);
                }
                jte[i] = dot(&cols[i], &e);
            }
            let delta = jtj.lu().solve(&jte).ok_or(Error::NewtonNonConvergence {
                residual: res,
                iterations,
            })?;

            let mut step_dir = vec![0.0f64; k + 1];
            for (j, t) in tangents.iter().enumerate() {
                for (s, &ti) in step_dir.iter_mut().zip(t) {
                    *s += delta[j] * ti;
                }
            }

            // Halve the damping factor until the residual decreases.
            let mut alpha = 1.0f64;
            loop {
                let y_new = retract_full(&y, &step_dir, alpha);
                let psi_new = self.psi_raw(&y_new)?;
                let res_new = dist(target, &psi_new);
                if res_new < res {
                    y = y_new;
                    psi_y = psi_new;
                    res = res_new;
                    break;
                }
                alpha *= 0.5;
                if alpha < 1e-10 {
                    return Err(Error::NewtonNonConvergence {
                        residual: res,
                        iterations,
                    });
                }
            }
        }
        if res <= NEWTON_RESIDUAL_TOL {
            Ok(y)
        } else {
            Err(Error::NewtonNonConvergence {
                residual: res,
                iterations,
            })
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Geodesic `cos(ρ) p + sin(ρ) w` for a unit tangent `w ⊥ p`.
fn geodesic_step(p: &[f64], w: &[f64], rho: f64) -> Vec<f64> {
    let (s, c) = rho.sin_cos();
    p.iter().zip(w).map(|(&pi, &wi)| c * pi + s * wi).collect()
}

/// Orthonormal basis of `y^⊥` from the Householder reflector sending the
/// dominant axis onto `y`; deterministic in `y`.
fn tangent_basis(y: &[f64]) -> Vec<Vec<f64>> {
    let n = y.len();
    let m = y
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.abs().partial_cmp(&b.abs()).expect("finite"))
        .map(|(i, _)| i)
        .expect("nonempty");
    let sign = if y[m] >= 0.0 { 1.0 } else { -1.0 };
    let mut v = y.to_vec();
    v[m] += sign;
    let vnorm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    for c in &mut v {
        *c /= vnorm;
    }
    // Columns j != m of H = I - 2vvᵀ span y^⊥.
    (0..n)
        .filter(|&j| j != m)
        .map(|j| {
            let mut col = vec![0.0; n];
            for (i, ci) in col.iter_mut().enumerate() {
                *ci = -2.0 * v[i] * v[j];
            }
            col[j] += 1.0;
            col
        })
        .collect()
}

/// Step along `dir`, clamp to the (closed) positive orthant, renormalize.
fn retract_full(y: &[f64], dir: &[f64], alpha: f64) -> Vec<f64> {
    let mut z: Vec<f64> = y
        .iter()
        .zip(dir)
        .map(|(&yi, &di)| (yi + alpha * di).max(1e-12))
        .collect();
    let norm = z.iter().map(|c| c * c).sum::<f64>().sqrt();
    for c in &mut z {
        *c /= norm;
    }
    z
}

fn retract(y: &[f64], tangent: &[f64], step: f64) -> Vec<f64> {
    retract_full(y, tangent, step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rng;

    fn model1() -> ZonoidModel {
        ZonoidModel::new(1).unwrap()
    }

    #[test]
    fn support_k1_closed_forms() {
        let m = model1();
        // h(1, 0) = 1/π.
        let v = m.support(&[1.0, 0.0]).unwrap();
        assert!((v - 1.0 / PI).abs() < 1e-12, "h(e1) = {v}");
        // h(μ) = 1/(2 sqrt(2)).
        let vmu = m.support(&mu(1)).unwrap();
        assert!((vmu - 0.5 / 2.0f64.sqrt()).abs() < 1e-12, "h(mu) = {vmu}");
    }

    #[test]
    fn support_homogeneity() {
        let m = model1();
        let mut rng = Rng::new(31);
        for _ in 0..10 {
            let x = vec![rng.uniform_in(0.1, 2.0), rng.uniform_in(0.1, 2.0)];
            let x2: Vec<f64> = x.iter().map(|c| 2.0 * c).collect();
            let a = m.support(&x).unwrap();
            let b = m.support(&x2).unwrap();
            assert!((b - 2.0 * a).abs() < 1e-11 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn gradient_at_mu_k1() {
        let m = model1();
        let g = m.support_gradient(&mu(1)).unwrap();
        // (1/4, 1/4): consistent with h(μ) = 1/(2√2) and the Euler identity.
        assert!((g[0] - 0.25).abs() < 1e-12, "g = {g:?}");
        assert!((g[1] - 0.25).abs() < 1e-12);
        assert!((m.grad_mu_norm() - radial_maximum(1)).abs() < 1e-11);
    }

    #[test]
    fn gradient_euler_identity() {
        // <x, ∇h(x)> = h(x) by 1-homogeneity.
        for k in 1..=2usize {
            let m = ZonoidModel::new(k).unwrap();
            let mut rng = Rng::new(17);
            for _ in 0..5 {
                let x: Vec<f64> = (0..=k).map(|_| rng.uniform_in(0.2, 1.5)).collect();
                let h = m.support(&x).unwrap();
                let g = m.support_gradient(&x).unwrap();
                let e: f64 = x.iter().zip(&g).map(|(&a, &b)| a * b).sum();
                assert!((e - h).abs() < 1e-10 * h, "k={k}: {e} vs {h}");
            }
        }
    }

    #[test]
    fn gradient_permutation_equivariance() {
        let m = ZonoidModel::new(2).unwrap();
        let x = [0.9, 0.5, 0.3];
        let xp = [0.5, 0.3, 0.9];
        let g = m.support_gradient(&x).unwrap();
        let gp = m.support_gradient(&xp).unwrap();
        assert!((g[1] - gp[0]).abs() < 1e-12);
        assert!((g[2] - gp[1]).abs() < 1e-12);
        assert!((g[0] - gp[2]).abs() < 1e-12);
    }

    #[test]
    fn psi_fixes_mu() {
        for k in 1..=2usize {
            let m = ZonoidModel::new(k).unwrap();
            let p = m.psi(&Direction::mu(k)).unwrap();
            for (a, b) in p.coords().iter().zip(mu(k)) {
                assert!((a - b).abs() < 1e-11, "k={k}");
            }
        }
    }

    #[test]
    fn dpsi_eigenvalue_k1() {
        // Dψ(μ) acts on the tangent (1,-1)/√2 by (k+1)/(k+3) = 1/2.
        let m = model1();
        let w = [1.0 / 2.0f64.sqrt(), -1.0 / 2.0f64.sqrt()];
        let d = m
            .dpsi_directional(&Direction::mu(1), &w, 1e-4)
            .unwrap();
        for (di, wi) in d.iter().zip(w) {
            assert!((di - 0.5 * wi).abs() < 1e-6, "d = {d:?}");
        }
    }

    #[test]
    fn radial_at_mu_is_calibrated_maximum() {
        for k in 1..=2usize {
            let m = ZonoidModel::new(k).unwrap();
            let r = m.radial(&Direction::mu(k)).unwrap();
            assert!(
                (r - radial_maximum(k)).abs() < 1e-10,
                "k={k}: r(mu) = {r} vs {}",
                radial_maximum(k)
            );
            assert!(m.calibration_deviation() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn radial_k1_theta_parametrization() {
        // θ = π/4 is μ in angle form.
        let m = model1();
        let th = PI / 4.0;
        let r = m
            .radial(&Direction::new(vec![th.cos(), th.sin()]).unwrap())
            .unwrap();
        assert!((r - radial_maximum(1)).abs() < 1e-10);
    }

    #[test]
    fn radial_is_maximal_at_mu() {
        let m = model1();
        let rmax = radial_maximum(1);
        let mut rng = Rng::new(5);
        for _ in 0..100 {
            let th = rng.uniform_in(0.02, PI / 4.0);
            let r = m
                .radial(&Direction::new(vec![th.cos(), th.sin()]).unwrap())
                .unwrap();
            assert!(r <= rmax + 1e-9, "r({th}) = {r} > {rmax}");
        }
    }

    #[test]
    fn radial_refuses_boundary() {
        let m = model1();
        let u = Direction::new(vec![1.0, 1e-9]).unwrap();
        assert!(matches!(m.radial(&u), Err(Error::Domain(_))));
    }

    #[test]
    fn newton_round_trip_k1_k2() {
        let mut rng = Rng::new(77);
        for k in 1..=2usize {
            let m = ZonoidModel::new(k).unwrap();
            for _ in 0..20 {
                let u = {
                    let x: Vec<f64> = (0..=k).map(|_| rng.uniform_in(0.05, 1.0)).collect();
                    Direction::new(x).unwrap()
                };
                let y = m.psi_inverse(&u).unwrap();
                let back = m.psi(&y).unwrap();
                let d = dist(back.coords(), u.coords());
                assert!(d < 1e-10, "k={k}: round trip residual {d}");
            }
        }
    }

    #[test]
    fn radial_max_sanity() {
        for k in 1..=10usize {
            let r = radial_maximum(k);
            assert!(r > 0.0 && r < 1.0, "k={k}: R = {r}");
        }
        assert!((radial_maximum(1) - 0.5 / 2.0f64.sqrt()).abs() < 1e-15);
        assert!((radial_maximum(2) - 2.0 / (PI * 3.0f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn k3_model_calibrates() {
        let m = ZonoidModel::new(3).unwrap();
        assert!(
            m.calibration_deviation() < 1e-9,
            "s_3 deviation {}",
            m.calibration_deviation()
        );
    }

    #[test]
    fn moment_closed_forms() {
        // G(2) for k=1 is π/4.
        assert!((sphere_moment(1, 2) - PI / 4.0).abs() < 1e-14);
        // Ratio identities G(4)/G(2) and G(6)/G(2).
        for k in 1..=4usize {
            let kf = k as f64;
            let r42 = sphere_moment(k, 4) / sphere_moment(k, 2);
            assert!((r42 - 3.0 / (kf + 3.0)).abs() < 1e-13, "k={k}");
            let r62 = sphere_moment(k, 6) / sphere_moment(k, 2);
            assert!(
                (r62 - 15.0 / ((kf + 3.0) * (kf + 5.0))).abs() < 1e-13,
                "k={k}"
            );
        }
    }

    #[test]
    fn moment_quadrature_matches_closed_form() {
        for k in 1..=4usize {
            for m in [0u32, 2, 4, 6] {
                let q = sphere_moment_quadrature(k, m, 32);
                let c = sphere_moment(k, m);
                assert!((q - c).abs() < 1e-10 * c.max(1.0), "k={k} m={m}: {q} vs {c}");
            }
        }
    }

    #[test]
    fn mixed_moments() {
        // ∫ ξ1² ξ2² / G(2) = 1/(k+3); ∫ ξ1⁴ ξ2² / G(2) = 3/((k+3)(k+5)).
        for k in 1..=2usize {
            let kf = k as f64;
            let g2 = sphere_moment(k, 2);
            let m22 = mixed_moment_quadrature(k, &[(0, 2), (1, 2)], 48) / g2;
            assert!((m22 - 1.0 / (kf + 3.0)).abs() < 1e-8, "k={k}: {m22}");
            let m42 = mixed_moment_quadrature(k, &[(0, 4), (1, 2)], 48) / g2;
            assert!(
                (m42 - 3.0 / ((kf + 3.0) * (kf + 5.0))).abs() < 1e-8,
                "k={k}: {m42}"
            );
        }
    }

    #[test]
    fn prefactor_equals_radial_over_second_moment() {
        // prefactor = R / (sqrt(k+1) G(2)).
        for k in 1..=3usize {
            let m = ZonoidModel::new(k).unwrap();
            let expected = radial_maximum(k) / (((k + 1) as f64).sqrt() * sphere_moment(k, 2));
            assert!(
                ((m.prefactor() - expected) / expected).abs() < 1e-12,
                "k={k}"
            );
        }
    }

    #[test]
    fn inradius_matches_nearest_vertex() {
        // Geodesic distance from μ to the nearest simplex vertex
        // α_k = (1,...,1,0)/sqrt(k) equals arctan(1/sqrt(k)).
        for k in 1..=3usize {
            let kf = k as f64;
            let cos_angle = (kf / (kf + 1.0)).sqrt();
            let d = cos_angle.acos();
            assert!((d - inradius(k)).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn exit_distance_bounds() {
        // Minimum over the chamber equals the inradius (k = 2).
        let basis = [
            [1.0 / 2.0f64.sqrt(), 0.0, -1.0 / 2.0f64.sqrt()],
            [1.0 / 6.0f64.sqrt(), -2.0 / 6.0f64.sqrt(), 1.0 / 6.0f64.sqrt()],
        ];
        let mut min_l = f64::INFINITY;
        for i in 0..=200 {
            let alpha = -PI / 6.0 + (i as f64) / 200.0 * PI / 3.0;
            let w: Vec<f64> = (0..3)
                .map(|j| alpha.cos() * basis[0][j] + alpha.sin() * basis[1][j])
                .collect();
            let l = chamber_exit_distance(2, &w);
            assert!(l >= inradius(2) - 1e-12);
            min_l = min_l.min(l);
        }
        assert!((min_l - inradius(2)).abs() < 1e-4);
    }

    #[test]
    fn helmert_basis_is_orthonormal() {
        for k in 1..=4usize {
            let b = mu_perp_basis(k);
            assert_eq!(b.len(), k);
            let m = mu(k);
            for (i, v) in b.iter().enumerate() {
                assert!(dot(v, &m).abs() < 1e-15);
                for (j, w) in b.iter().enumerate() {
                    let d = dot(v, w);
                    let target = if i == j { 1.0 } else { 0.0 };
                    assert!((d - target).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn direction_renormalizes() {
        let d = Direction::new(vec![3.0, 4.0]).unwrap();
        let n: f64 = d.coords().iter().map(|c| c * c).sum();
        assert!((n - 1.0).abs() < 1e-14);
        assert!(Direction::new(vec![0.0, 0.0]).is_err());
        assert!(Direction::new(vec![1.0]).is_err());
    }
}
