//! Numerical integration engines.
//!
//! Three engines share one configuration and one result type:
//!
//! * [`integrate_adaptive`]: globally adaptive 21-point Gauss-Kronrod on a
//!   finite interval, with optional endpoint-singularity substitution.
//! * [`integrate_decaying`]: semi-infinite integrals of exponentially damped
//!   integrands, by progressive truncation.
//! * [`integrate_oscillatory`]: semi-infinite oscillatory integrals, by
//!   partitioning at the zeros of the oscillating factor and accelerating the
//!   alternating series of lobe integrals with Wynn's epsilon algorithm.
//!
//! All engines are generic over the value type ([`f64`] or [`Complex64`]).
//! Error estimates are heuristic (embedded-rule differences plus an
//! acceleration tail term), not rigorous bounds.

mod adaptive;
mod decaying;
mod epsilon;
mod kronrod;
mod oscillatory;

use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

pub use adaptive::{integrate_adaptive, integrate_adaptive_with, integrate_pieces, Endpoints};
pub use decaying::integrate_decaying;
pub use epsilon::wynn_epsilon;
pub use oscillatory::{integrate_oscillatory, integrate_oscillatory_settled, Oscillator};

/// Values an integrand may return.
pub trait QuadValue:
    Copy
    + Debug
    + Send
    + Sync
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    /// Modulus used for error control.
    fn norm(self) -> f64;
    fn recip(self) -> Self;
    fn is_finite(self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(self) -> f64 {
        self.abs()
    }
    fn recip(self) -> Self {
        1.0 / self
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
    fn recip(self) -> Self {
        Complex64::new(1.0, 0.0) / self
    }
    fn is_finite(self) -> bool {
        Complex64::is_finite(self)
    }
}

/// Tolerances and budgets shared by every engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Integrand evaluations allowed per adaptive call.
    pub max_evals: usize,
    /// Lobes the oscillatory engine may sum before giving up.
    pub oscillatory_max_zeros: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-9,
            max_evals: 50_000,
            oscillatory_max_zeros: 4000,
        }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self, crate::Error> {
        QuadratureConfig {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self, crate::Error> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(crate::Error::Domain(format!(
                "tolerances must be positive (abs_tol={}, rel_tol={})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_evals < 100 {
            return Err(crate::Error::Domain(format!(
                "max_evals must be at least 100, got {}",
                self.max_evals
            )));
        }
        Ok(self)
    }

    /// Same budgets with both tolerances scaled by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        QuadratureConfig {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            ..self
        }
    }

    pub fn with_abs_tol(self, abs_tol: f64) -> Self {
        QuadratureConfig { abs_tol, ..self }
    }

    pub(crate) fn tolerance_for(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }
}

/// Outcome of an integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<V> {
    pub value: V,
    pub err_estimate: f64,
    pub evals: usize,
    pub converged: bool,
}

impl<V: QuadValue> QuadratureResult<V> {
    pub(crate) fn zero() -> Self {
        QuadratureResult {
            value: V::zero(),
            err_estimate: 0.0,
            evals: 0,
            converged: true,
        }
    }

    /// Sum of two independent integrations.
    pub fn combine(self, other: Self) -> Self {
        QuadratureResult {
            value: self.value + other.value,
            err_estimate: self.err_estimate + other.err_estimate,
            evals: self.evals + other.evals,
            converged: self.converged && other.converged,
        }
    }

    pub fn map<W, G: FnOnce(V) -> W>(self, g: G) -> QuadratureResult<W> {
        QuadratureResult {
            value: g(self.value),
            err_estimate: self.err_estimate,
            evals: self.evals,
            converged: self.converged,
        }
    }

    /// Turns a non-converged result into [`crate::Error::Quadrature`].
    pub fn require_converged(self, what: &str) -> Result<Self, crate::Error> {
        if self.converged {
            Ok(self)
        } else {
            Err(crate::Error::Quadrature {
                what: what.to_string(),
                achieved: self.err_estimate,
                evals: self.evals,
            })
        }
    }
}

/// Carries the first error raised inside an integrand out of a quadrature
/// call, which itself only sees values. Failed evaluations contribute zero.
pub(crate) struct Trap(std::sync::Mutex<Option<crate::Error>>);

impl Trap {
    pub(crate) fn new() -> Self {
        Trap(std::sync::Mutex::new(None))
    }

    pub(crate) fn catch<V: QuadValue>(&self, r: crate::Result<V>) -> V {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.lock().unwrap_or_else(|p| p.into_inner()).get_or_insert(e);
                V::zero()
            }
        }
    }

    pub(crate) fn check(self) -> crate::Result<()> {
        match self.0.into_inner().unwrap_or_else(|p| p.into_inner()) {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}
