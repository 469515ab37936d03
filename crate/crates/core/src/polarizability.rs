//! Static polarizability of the electron gas.
//!
//! `χ⁰(q, p)` is the contribution of a thin shell of electrons at momentum
//! `p`. Continued to complex `q = x + iy` it is analytic everywhere except on
//! the two vertical lines `x = ±2p`, across which it jumps by `Δχ⁰(y, p)`.
//! The thermal polarizability `χᵀ(q) = ∫ g(p) χ⁰(q, p) dp` smears those cuts
//! over the thermal window.
//!
//! Each analytic piece is evaluated in a form free of cancellation:
//!
//! * outside the strip (`|x| > 2p`): with `t = 2p/q`,
//!   `ℓ = log(1 + t) - log(1 - t)`;
//! * inside the strip (`|x| < 2p`): with `z = q/2p`,
//!   `ℓ = log(1 + z) - log(1 - z)`;
//!
//! and `χ⁰ = -p/2π² + (q² - 4p²) ℓ / (8π² q)`. Both are short power series
//! near `q = 0` and `q = ∞`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::gas::ElectronGas;
use crate::quad::{QuadratureConfig, QuadratureResult};
use crate::{Error, Result};

/// Complex momentum in units of the electron mass.
pub type ComplexValue = Complex64;

/// Distance from a cut (relative to `p`) below which evaluation snaps to the
/// one-sided limit of the nearer side.
const SNAP: f64 = 1e-12;

// Below |t| (or |z|) = SERIES_RADIUS the power series is used.
const SERIES_RADIUS: f64 = 0.25;

/// Region of the complex plane relative to the cuts of `χ⁰(·, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchDomain {
    /// `Re q < -2p`
    G1,
    /// `-2p < Re q < 2p`
    G2,
    /// `Re q > 2p`
    G3,
    /// `Re q = 2p`
    OnCutPlus,
    /// `Re q = -2p`
    OnCutMinus,
}

impl BranchDomain {
    pub fn classify(q: ComplexValue, p: f64) -> BranchDomain {
        let x = q.re;
        if x == 2.0 * p {
            BranchDomain::OnCutPlus
        } else if x == -2.0 * p {
            BranchDomain::OnCutMinus
        } else if x < -2.0 * p {
            BranchDomain::G1
        } else if x > 2.0 * p {
            BranchDomain::G3
        } else {
            BranchDomain::G2
        }
    }
}

/// Which of the two cuts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cut {
    /// `Re q = +2p`
    AtPlus2p,
    /// `Re q = -2p`
    AtMinus2p,
}

/// Side from which a cut is approached. `Plus` comes from smaller `Re q`
/// (`C⁺`), `Minus` from larger `Re q` (`C⁻`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutSide {
    Plus,
    Minus,
}

/// The analytic function being continued.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    /// The function of G1 and G3 (one expression serves both).
    Outer,
    /// The function of G2.
    Inner,
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("shell momentum p must be positive, got {p}")))
    }
}

/// `log(1 + z)` with full relative accuracy for small `|z|`.
fn ln_1p(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        let re = 0.5 * (z.re * (2.0 + z.re) + z.im * z.im).ln_1p();
        Complex64::new(re, z.im.atan2(1.0 + z.re))
    } else {
        (Complex64::new(1.0, 0.0) + z).ln()
    }
}

/// `-(q/2π²) Σ_{k≥1} t^{2k+1}/(4k² - 1)`, the outer branch for small `t = 2p/q`.
fn outer_series(q: Complex64, t: Complex64) -> Complex64 {
    let t2 = t * t;
    let mut power = t * t2;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..60 {
        let kf = k as f64;
        let term = power / (4.0 * kf * kf - 1.0);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
        power *= t2;
    }
    -q * sum / (2.0 * PI * PI)
}

/// `Σ_{k≥0} z^{2k}/(2k+1)`, equal to `ℓ p / q` on the inner branch.
fn inner_series(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..60 {
        let term = power / (2 * k + 1) as f64;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
        power *= z2;
    }
    sum
}

fn branch_value(q: Complex64, p: f64, branch: Branch) -> Complex64 {
    let base = -p / (2.0 * PI * PI);
    let q2m = q * q - 4.0 * p * p;
    match branch {
        Branch::Outer => {
            let t = 2.0 * p / q;
            if t.norm() < SERIES_RADIUS {
                outer_series(q, t)
            } else {
                let ell = ln_1p(t) - ln_1p(-t);
                base + q2m * ell / (8.0 * PI * PI * q)
            }
        }
        Branch::Inner => {
            if q.norm() == 0.0 {
                return Complex64::new(-p / (PI * PI), 0.0);
            }
            let z = q / (2.0 * p);
            if z.norm() < SERIES_RADIUS {
                base + q2m * inner_series(z) / (8.0 * PI * PI * p)
            } else if z.norm() > 1.0 / SERIES_RADIUS {
                // log((1+t)/(1-t)) + iπ sgn(y), the strip's branch continued
                // beyond |q| = 2p.
                let sign = if q.im >= 0.0 { 1.0 } else { -1.0 };
                outer_series(q, 2.0 * p / q) + Complex64::new(0.0, sign) * q2m / (8.0 * PI * q)
            } else {
                let ell = ln_1p(z) - ln_1p(-z);
                base + q2m * ell / (8.0 * PI * PI * q)
            }
        }
    }
}

/// Real-axis polarizability
/// `χ⁰(q, p) = [-4pq + (q² - 4p²) log|(q+2p)/(q-2p)|] / (8π² q)` for `q > 0`.
pub fn chi0_real(q: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::Domain(format!(
            "chi0_real needs q > 0 (got {q}); use chi0_complex for general q"
        )));
    }
    Ok(real_axis(q, p))
}

fn real_axis(q: f64, p: f64) -> f64 {
    let two_p = 2.0 * p;
    if q == two_p {
        return -p / (2.0 * PI * PI);
    }
    let base = -p / (2.0 * PI * PI);
    if q < two_p {
        let z = q / two_p;
        let ratio = if z < SERIES_RADIUS {
            inner_series(Complex64::new(z, 0.0)).re / p
        } else {
            2.0 * z.atanh() / q
        };
        base + (q * q - two_p * two_p) * ratio / (8.0 * PI * PI)
    } else {
        let t = two_p / q;
        if t < SERIES_RADIUS {
            outer_series(Complex64::new(q, 0.0), Complex64::new(t, 0.0)).re
        } else {
            base + (q * q - two_p * two_p) * 2.0 * t.atanh() / (8.0 * PI * PI * q)
        }
    }
}

/// `χ⁰(q, p)` for complex `q`, analytic on G1, G2 and G3 separately.
///
/// Points within `1e-12·p` of a cut evaluate to the one-sided limit of the
/// nearer side; a point exactly on a cut off the real axis is an error.
pub fn chi0_complex(q: ComplexValue, p: f64) -> Result<ComplexValue> {
    check_p(p)?;
    if !q.is_finite() {
        return Err(Error::Domain(format!("q must be finite, got {q}")));
    }
    let (x, y) = (q.re, q.im);
    if y == 0.0 {
        if x == 0.0 {
            return Ok(Complex64::new(-p / (PI * PI), 0.0));
        }
        return Ok(Complex64::new(real_axis(x.abs(), p), 0.0));
    }
    let two_p = 2.0 * p;
    for (cut, centre) in [(Cut::AtPlus2p, two_p), (Cut::AtMinus2p, -two_p)] {
        let offset = x - centre;
        if offset == 0.0 {
            return Err(Error::OnBranchCut { re: x, im: y, p });
        }
        if offset.abs() < SNAP * p {
            let side = if offset < 0.0 { CutSide::Plus } else { CutSide::Minus };
            return chi0_cut_limit(side, cut, y, p);
        }
    }
    let branch = if x.abs() < two_p { Branch::Inner } else { Branch::Outer };
    Ok(branch_value(q, p, branch))
}

/// One-sided limit of `χ⁰` at height `y` on the given cut.
pub fn chi0_cut_limit(side: CutSide, cut: Cut, y: f64, p: f64) -> Result<ComplexValue> {
    check_p(p)?;
    if !y.is_finite() {
        return Err(Error::Domain(format!("y must be finite, got {y}")));
    }
    if y == 0.0 {
        return Ok(Complex64::new(-p / (2.0 * PI * PI), 0.0));
    }
    let (centre, branch) = match (cut, side) {
        (Cut::AtPlus2p, CutSide::Plus) => (2.0 * p, Branch::Inner),
        (Cut::AtPlus2p, CutSide::Minus) => (2.0 * p, Branch::Outer),
        (Cut::AtMinus2p, CutSide::Plus) => (-2.0 * p, Branch::Outer),
        (Cut::AtMinus2p, CutSide::Minus) => (-2.0 * p, Branch::Inner),
    };
    Ok(branch_value(Complex64::new(centre, y), p, branch))
}

/// Jump across the `+2p` cut, `Δχ⁰ = χ⁰(C⁺) - χ⁰(C⁻)`.
///
/// For `y ≥ 0` this is `-(1/8π) y (y - 4ip)/(y - 2ip)`. Below the real axis
/// the jump is the complex conjugate of its mirror image.
pub fn chi0_jump(y: f64, p: f64) -> ComplexValue {
    let mirrored = y < 0.0;
    let y = Complex64::new(y.abs(), 0.0);
    let i = Complex64::i();
    let jump = -y * (y - 4.0 * p * i) / (8.0 * PI * (y - 2.0 * p * i));
    if mirrored {
        jump.conj()
    } else {
        jump
    }
}

/// Thermal polarizability `χᵀ(q) = ∫₀^∞ g(p) χ⁰(q, p) dp`.
///
/// Off the real axis the shell at `p = |Re q|/2` has its cut through `q`:
/// shells below it see `q` outside their strip, shells above it inside. The
/// `p` integral is split there and each piece uses its own analytic branch,
/// so quadrature nodes close to the split never straddle the jump.
pub fn chi_t(
    q: ComplexValue,
    gas: &ElectronGas,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult<ComplexValue>> {
    gas.require_finite_temperature("chi_t")?;
    if !q.is_finite() {
        return Err(Error::Domain(format!("q must be finite, got {q}")));
    }
    let (x, y) = (q.re, q.im);
    let p_split = 0.5 * x.abs();

    let result = if y == 0.0 {
        let x = x.abs();
        gas.thermal_integral(
            |p: f64| {
                if x == 0.0 {
                    Complex64::new(-p / (PI * PI), 0.0)
                } else {
                    Complex64::new(real_axis(x, p), 0.0)
                }
            },
            None,
            &[p_split],
            cfg,
        )?
    } else {
        let below = gas.thermal_integral(
            |p: f64| branch_value(q, p, Branch::Outer),
            Some((0.0, p_split)),
            &[],
            cfg,
        )?;
        let above = gas.thermal_integral(
            |p: f64| branch_value(q, p, Branch::Inner),
            Some((p_split, f64::INFINITY)),
            &[],
            cfg,
        )?;
        below.combine(above)
    };
    if result.converged {
        Ok(result)
    } else {
        result.require_converged(&format!("chi_t at q = {q}"))
    }
}

/// Quasi-photon kernel `ν(q) = q² - λ χᵀ(q)`.
pub fn nu(
    q: ComplexValue,
    gas: &ElectronGas,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult<ComplexValue>> {
    let chi = chi_t(q, gas, cfg)?;
    let lambda = gas.lambda();
    Ok(QuadratureResult {
        value: q * q - chi.value * lambda,
        err_estimate: lambda * chi.err_estimate,
        ..chi
    })
}
