//! Error type shared by all modules of the crate.

use crate::numerics::QuadratureEstimate;
use std::fmt;

/// Errors reported by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument was outside the mathematical domain of the operation.
    Domain(String),
    /// The requested `(k, method, ...)` combination is not implemented.
    Unsupported(String),
    /// An adaptive quadrature ran out of subdivisions. The best estimate
    /// obtained so far is carried along with the failure.
    QuadratureNonConvergence { best: QuadratureEstimate },
    /// Newton iteration on the sphere did not reach the residual target.
    NewtonNonConvergence { residual: f64, iterations: usize },
    /// A Monte Carlo integrand returned NaN at the given sample index.
    NanSample { index: u64 },
    /// A sampled geometric configuration was numerically degenerate and the
    /// caller should draw a fresh sample.
    Degenerate(String),
    /// An integer division expected to be exact left a remainder.
    NonExactDivision(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::QuadratureNonConvergence { best } => write!(
                f,
                "quadrature did not converge (best estimate {} with error bound {})",
                best.value, best.error_bound
            ),
            Error::NewtonNonConvergence {
                residual,
                iterations,
            } => write!(
                f,
                "Newton iteration did not converge after {iterations} iterations (residual {residual:.3e})"
            ),
            Error::NanSample { index } => {
                write!(f, "Monte Carlo integrand returned NaN at sample {index}")
            }
            Error::Degenerate(msg) => write!(f, "degenerate configuration: {msg}"),
            Error::NonExactDivision(msg) => write!(f, "non-exact integer division: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
