//! Expected degrees of real Grassmannians.
//!
//! `delta_{k,n}` is the average number of projective k-planes in RP^n
//! meeting `(k+1)(n-k)` independent uniformly random subspaces of dimension
//! `n-k-1`. This crate computes it several independent ways and
//! cross-validates the routes against each other:
//!
//! * [`edeg`] — deterministic quadrature: the elliptic line integral for
//!   `delta_{1,n}`, its theta-parametrized twin, and the general
//!   `beta_{k,n} I_k(n)` zonoid route (`k = 1, 2`);
//! * [`mc_schubert`] — a geometric Monte Carlo oracle for `delta_{1,3}`
//!   (four random lines in RP³, counting real transversals through the
//!   quadric they span) plus the deterministic `delta_{0,n} = 1` check;
//! * [`asymptotics`] — the closed-form constants of the large-`n` law
//!   `delta_{k,n} ~ a_k b_k^n n^(-k(k+1)/4)`, with the polynomial-space
//!   integral `Λ_k` evaluated both in coefficient space and as a sphere
//!   integral of the square root of the discriminant;
//! * [`complex_degree`] — the exact integer degree of the complex
//!   Grassmannian and its asymptotic, used as ceilings and bridges;
//! * [`zonoid`] — the support-function geometry engine behind the radial
//!   function (gradient quadratures, Newton inversion of the Gauss-type
//!   map, sphere moments);
//! * [`numerics`] — gamma functions, adaptive and double-exponential
//!   quadrature, exact integers, and a seeded, sharded Monte Carlo driver.

pub mod asymptotics;
pub mod complex_degree;
pub mod edeg;
pub mod error;
pub mod mc_schubert;
pub mod numerics;
pub mod zonoid;

pub use error::{Error, Result};
pub use numerics::{ExactInteger, MonteCarloEstimate, QuadratureEstimate};
