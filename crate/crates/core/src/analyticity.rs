//! Numerical probes of analyticity: contour integrals around rectangles and
//! one-sided jump estimates across the lines `Re q = 2p`.
//!
//! Each `χ⁰(·, p)` is analytic away from its two cuts, so its integral around
//! any rectangle that avoids them vanishes. `χᵀ` superposes cuts at every
//! `2p` in the thermal window; a rectangle straddling that family picks up
//! `-i ∫ g(p) ∫ Δχ⁰(y, p) dy dp`, which is not zero.

use std::cell::Cell;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::gas::ElectronGas;
use crate::polarizability::{chi0_complex, chi0_jump, chi_t, ComplexValue};
use crate::quad::{integrate_adaptive, integrate_pieces, QuadratureConfig, QuadratureResult};
use crate::{Error, Result};

/// Axis-aligned rectangle with corners `x0 + i y0` and `x1 + i y1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectangleSpec {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl RectangleSpec {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        let rect = RectangleSpec { x0, y0, x1, y1 };
        rect.validate()?;
        Ok(rect)
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.x0, self.y0, self.x1, self.y1].iter().all(|v| v.is_finite());
        if !finite || self.x0 >= self.x1 || self.y0 > self.y1 {
            return Err(Error::Domain(format!("malformed rectangle {self:?}")));
        }
        Ok(())
    }

    /// Vertices in counterclockwise order starting at the lower left.
    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.x0, self.y0),
            Complex64::new(self.x1, self.y0),
            Complex64::new(self.x1, self.y1),
            Complex64::new(self.x0, self.y1),
        ]
    }

    /// Directed edges in the order of travel.
    fn edges(&self, orientation: Orientation) -> Vec<(Complex64, Complex64)> {
        let c = self.corners();
        let mut edges: Vec<(Complex64, Complex64)> = (0..4).map(|k| (c[k], c[(k + 1) % 4])).collect();
        if orientation == Orientation::Clockwise {
            edges.reverse();
            for e in &mut edges {
                *e = (e.1, e.0);
            }
        }
        edges
    }

    /// Distance from the boundary to the origin.
    fn distance_to_origin(&self) -> f64 {
        let clamp = |lo: f64, hi: f64| if lo > 0.0 { lo } else if hi < 0.0 { -hi } else { 0.0 };
        let dx = clamp(self.x0, self.x1);
        let dy = clamp(self.y0, self.y1);
        if dx > 0.0 || dy > 0.0 {
            return dx.hypot(dy);
        }
        // origin inside: nearest edge
        (-self.x0).min(self.x1).min(-self.y0).min(self.y1)
    }
}

/// Direction of travel around a rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Counterclockwise,
    Clockwise,
}

/// Integrates `f` along the straight segment `a → b`, cutting it where its
/// real part crosses any of `x_breaks`.
fn edge_integral<F>(f: &F, a: Complex64, b: Complex64, x_breaks: &[f64], cfg: &QuadratureConfig) -> QuadratureResult<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let d = b - a;
    let mut ts = vec![0.0];
    if d.re != 0.0 {
        let mut inner: Vec<f64> = x_breaks
            .iter()
            .map(|&x| (x - a.re) / d.re)
            .filter(|&t| t > 0.0 && t < 1.0)
            .collect();
        inner.sort_by(f64::total_cmp);
        ts.extend(inner);
    }
    ts.push(1.0);
    integrate_pieces(|t: f64| f(a + d * t) * d, &ts, cfg)
}

fn contour<F>(rect: &RectangleSpec, f: F, x_breaks: &[f64], orientation: Orientation, cfg: &QuadratureConfig) -> [QuadratureResult<Complex64>; 4]
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let edges = rect.edges(orientation);
    let results: Vec<QuadratureResult<Complex64>> = edges
        .par_iter()
        .map(|&(a, b)| edge_integral(&f, a, b, x_breaks, cfg))
        .collect();
    [results[0], results[1], results[2], results[3]]
}

/// `∮ χᵀ(q) dq` around `rect`.
///
/// The error estimate adds the edge quadrature errors to the largest
/// pointwise error of `χᵀ` times the perimeter.
pub fn rectangle_integral_chi_t(
    rect: &RectangleSpec,
    orientation: Orientation,
    gas: &ElectronGas,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult<ComplexValue>> {
    rect.validate()?;
    gas.require_finite_temperature("rectangle integral of chi_t")?;
    if rect.distance_to_origin() < 1e-6 {
        return Err(Error::Domain(
            "rectangle boundary must stay at least 1e-6 away from q = 0".into(),
        ));
    }

    // Errors from inside the integrand are gathered per edge.
    struct EdgeState {
        failure: Option<Error>,
        worst_inner: f64,
    }
    let edges = rect.edges(orientation);
    let per_edge: Vec<(QuadratureResult<Complex64>, EdgeState)> = edges
        .par_iter()
        .map(|&(a, b)| {
            let failure: Cell<Option<Error>> = Cell::new(None);
            let worst = Cell::new(0.0f64);
            let f = |q: Complex64| match chi_t(q, gas, cfg) {
                Ok(v) => {
                    worst.set(worst.get().max(v.err_estimate));
                    v.value
                }
                Err(e) => {
                    failure.set(Some(e));
                    Complex64::new(f64::NAN, 0.0)
                }
            };
            let r = edge_integral(&f, a, b, &[], cfg);
            (r, EdgeState { failure: failure.take(), worst_inner: worst.get() })
        })
        .collect();

    let mut total = QuadratureResult::<Complex64> {
        value: Complex64::new(0.0, 0.0),
        err_estimate: 0.0,
        evals: 0,
        converged: true,
    };
    let perimeter = 2.0 * ((rect.x1 - rect.x0) + (rect.y1 - rect.y0));
    let mut worst_inner = 0.0f64;
    for (r, state) in per_edge {
        if let Some(e) = state.failure {
            return Err(e);
        }
        worst_inner = worst_inner.max(state.worst_inner);
        total = total.combine(r);
    }
    total.err_estimate += worst_inner * perimeter;
    total.require_converged("rectangle integral of chi_t")
}

/// `-i ∫_{x0/2}^{x1/2} dp g(p) ∫_{y0}^{y1} dy Δχ⁰(y, p)`, the value the
/// rectangle integral of `χᵀ` must take in the closed first quadrant.
pub fn rectangle_reference(
    rect: &RectangleSpec,
    gas: &ElectronGas,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult<ComplexValue>> {
    rect.validate()?;
    if rect.x0 < 0.0 || rect.y0 < 0.0 {
        return Err(Error::Domain(
            "rectangle_reference needs a rectangle in the closed first quadrant".into(),
        ));
    }
    gas.require_finite_temperature("rectangle reference")?;
    if rect.y0 == rect.y1 {
        return Ok(QuadratureResult {
            value: Complex64::new(0.0, 0.0),
            err_estimate: 0.0,
            evals: 0,
            converged: true,
        });
    }
    let inner_cfg = cfg.scaled(0.1);
    let outer = gas.thermal_integral(
        |p: f64| integrate_adaptive(|y: f64| chi0_jump(y, p), rect.y0, rect.y1, &inner_cfg).value,
        Some((0.5 * rect.x0, 0.5 * rect.x1)),
        &[],
        cfg,
    )?;
    outer
        .map(|v| -Complex64::i() * v)
        .require_converged("rectangle reference")
}

/// `∮ χ⁰(q, p) dq` around `rect` for a single shell.
///
/// Horizontal edges are split where they cross `Re q = ±2p`, so a rectangle
/// straddling a cut returns `-i ∫ Δχ⁰ dy` over its height. A vertical edge
/// lying on a cut is rejected.
pub fn zero_t_rectangle_check(rect: &RectangleSpec, p: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult<ComplexValue>> {
    rect.validate()?;
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Domain(format!("p must be positive, got {p}")));
    }
    for x in [rect.x0, rect.x1] {
        if (x.abs() - 2.0 * p).abs() <= 1e-12 * p && rect.y1 > rect.y0 {
            return Err(Error::Domain(format!(
                "vertical edge at Re q = {x} lies on a branch cut of chi0(., {p})"
            )));
        }
    }
    let failure = std::sync::Mutex::new(None);
    let f = |q: Complex64| match chi0_complex(q, p) {
        Ok(v) => v,
        Err(e) => {
            failure.lock().unwrap().get_or_insert(e);
            Complex64::new(f64::NAN, 0.0)
        }
    };
    let edges = contour(rect, f, &[-2.0 * p, 2.0 * p], Orientation::Counterclockwise, cfg);
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let total = edges
        .into_iter()
        .fold(QuadratureResult::zero(), QuadratureResult::combine);
    total.require_converged("zero-temperature rectangle integral")
}

/// One sample of a continuity scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub x: f64,
    pub chi_t: ComplexValue,
    pub chi_t_err: f64,
    /// `χ⁰(x + iy, p_F)`; absent exactly on a cut.
    pub chi0: Option<ComplexValue>,
}

/// Samples `χᵀ(x + iy)` and `χ⁰(x + iy, p_F)` on `n_points` equally spaced
/// `x` values spanning `x_center ± half_width`.
pub fn continuity_profile(
    x_center: f64,
    y: f64,
    half_width: f64,
    n_points: usize,
    gas: &ElectronGas,
    cfg: &QuadratureConfig,
) -> Result<Vec<ProfilePoint>> {
    if n_points < 3 {
        return Err(Error::Domain(format!("continuity profile needs at least 3 points, got {n_points}")));
    }
    if !(half_width >= 0.0) || !x_center.is_finite() || !y.is_finite() {
        return Err(Error::Domain("continuity profile needs finite centre, height and half width".into()));
    }
    gas.require_finite_temperature("continuity profile")?;
    let step = 2.0 * half_width / (n_points - 1) as f64;
    (0..n_points)
        .into_par_iter()
        .map(|k| {
            let x = if k == (n_points - 1) / 2 && n_points % 2 == 1 {
                x_center
            } else {
                x_center - half_width + step * k as f64
            };
            let q = Complex64::new(x, y);
            let t = chi_t(q, gas, cfg)?;
            let chi0 = match chi0_complex(q, gas.p_fermi()) {
                Ok(v) => Some(v),
                Err(Error::OnBranchCut { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(ProfilePoint { x, chi_t: t.value, chi_t_err: t.err_estimate, chi0 })
        })
        .collect()
}

/// Estimated jump `f(x0⁺) - f(x0⁻)` from one-sided quadratic extrapolation
/// of samples at `x0 ± δ, ± 2δ, ± 3δ`.
///
/// A plain difference `f(x0 + δ) - f(x0 - δ)` is dominated by the slope; the
/// extrapolated limits cancel it and leave an `O(δ³)` residue.
pub fn estimate_jump<F>(f: F, x0: f64, delta: f64) -> Result<ComplexValue>
where
    F: Fn(f64) -> Result<ComplexValue>,
{
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("jump estimate needs delta > 0, got {delta}")));
    }
    let side = |s: f64| -> Result<ComplexValue> {
        Ok(f(x0 + s * delta)? * 3.0 - f(x0 + 2.0 * s * delta)? * 3.0 + f(x0 + 3.0 * s * delta)?)
    };
    Ok(side(1.0)? - side(-1.0)?)
}

/// Jump of `χᵀ` across `Re q = x0` at height `y`.
pub fn chi_t_jump(x0: f64, y: f64, delta: f64, gas: &ElectronGas, cfg: &QuadratureConfig) -> Result<ComplexValue> {
    estimate_jump(|x| Ok(chi_t(Complex64::new(x, y), gas, cfg)?.value), x0, delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::MuMode;
    use crate::polarizability::{chi0_cut_limit, Cut, CutSide};
    use std::f64::consts::PI;

    fn gas(t: f64) -> ElectronGas {
        ElectronGas::derive(3.0, t, MuMode::Solved).unwrap()
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn rectangle_validation() {
        assert!(RectangleSpec::new(1.0, 0.0, 0.5, 1.0).is_err());
        assert!(RectangleSpec::new(0.0, 1.0, 1.0, 0.5).is_err());
        assert!(RectangleSpec::new(0.0, 0.0, 1.0, f64::NAN).is_err());
        let r = RectangleSpec::new(-1.0, -1.0, 1.0, 2.0).unwrap();
        assert_eq!(r.distance_to_origin(), 1.0);
        let r = RectangleSpec::new(3.0, 4.0, 5.0, 6.0).unwrap();
        assert_eq!(r.distance_to_origin(), 5.0);
    }

    #[test]
    fn cauchy_holds_in_each_open_domain() {
        let p = crate::gas::fermi_momentum(3.0);
        for rect in [
            RectangleSpec::new(3.0 * p, 0.1 * p, 5.0 * p, p).unwrap(),
            RectangleSpec::new(-p, 0.1 * p, p, p).unwrap(),
            RectangleSpec::new(-5.0 * p, -p, -3.0 * p, 0.5 * p).unwrap(),
        ] {
            let v = zero_t_rectangle_check(&rect, p, &cfg()).unwrap().value;
            assert!(v.norm() < 1e-10, "{rect:?}: {v}");
        }
    }

    #[test]
    fn straddling_rectangle_picks_up_the_jump() {
        let p = crate::gas::fermi_momentum(3.0);
        let rect = RectangleSpec::new(p, 0.1 * p, 3.0 * p, p).unwrap();
        let v = zero_t_rectangle_check(&rect, p, &cfg()).unwrap().value;
        // ∫ Δχ⁰ dy from the cut limits (not the closed-form jump).
        let jump = integrate_adaptive(
            |y: f64| {
                chi0_cut_limit(CutSide::Plus, Cut::AtPlus2p, y, p).unwrap()
                    - chi0_cut_limit(CutSide::Minus, Cut::AtPlus2p, y, p).unwrap()
            },
            0.1 * p,
            p,
            &cfg(),
        )
        .value;
        assert!((v - (-Complex64::i() * jump)).norm() < 1e-9, "{v} vs {}", -Complex64::i() * jump);
    }

    #[test]
    fn vertical_edge_on_cut_is_rejected() {
        let p = 0.01;
        let rect = RectangleSpec::new(2.0 * p, 0.1 * p, 3.0 * p, p).unwrap();
        assert!(zero_t_rectangle_check(&rect, p, &cfg()).is_err());
    }

    #[test]
    fn orientation_reverses_sign() {
        let g = gas(0.01);
        let pf = g.p_fermi();
        let rect = RectangleSpec::new(1.5 * pf, 0.001, 2.5 * pf, 0.003).unwrap();
        let ccw = rectangle_integral_chi_t(&rect, Orientation::Counterclockwise, &g, &cfg()).unwrap();
        let cw = rectangle_integral_chi_t(&rect, Orientation::Clockwise, &g, &cfg()).unwrap();
        assert!((ccw.value + cw.value).norm() < 1e-3 * ccw.value.norm());
    }

    #[test]
    fn rectangle_beyond_thermal_support_is_analytic() {
        let g = gas(0.01);
        let pf = g.p_fermi();
        let rect = RectangleSpec::new(10.0 * pf, 0.001, 12.0 * pf, 0.005).unwrap();
        let v = rectangle_integral_chi_t(&rect, Orientation::Counterclockwise, &g, &cfg()).unwrap();
        assert!(v.value.norm() < 1e-10, "{}", v.value);
    }

    #[test]
    fn rectangle_near_origin_rejected() {
        let g = gas(0.01);
        let rect = RectangleSpec::new(-0.001, -0.001, 0.001, 0.001).unwrap();
        assert!(rectangle_integral_chi_t(&rect, Orientation::Counterclockwise, &g, &cfg()).is_ok());
        let rect = RectangleSpec::new(0.0, 0.0, 0.001, 0.002).unwrap();
        assert!(rectangle_integral_chi_t(&rect, Orientation::Counterclockwise, &g, &cfg()).is_err());
    }

    #[test]
    fn reference_trivial_cases() {
        let g = gas(0.01);
        let pf = g.p_fermi();
        let flat = RectangleSpec::new(pf, 0.002, 3.0 * pf, 0.002).unwrap();
        assert_eq!(rectangle_reference(&flat, &g, &cfg()).unwrap().value, Complex64::new(0.0, 0.0));
        let (lo, _) = g.support();
        let below = RectangleSpec::new(0.1 * lo, 0.001, 1.9 * lo, 0.005).unwrap();
        assert!(rectangle_reference(&below, &g, &cfg()).unwrap().value.norm() < 1e-20);
        let left = RectangleSpec::new(-pf, 0.001, pf, 0.005).unwrap();
        assert!(rectangle_reference(&left, &g, &cfg()).is_err());
    }

    #[test]
    fn reference_against_closed_form_inner_integral() {
        // ∫ Δχ⁰ dy has the antiderivative
        // -(1/8π)[y²/2 - 2ipy + 4p² log(y - 2ip)]... checked here through a
        // cold gas, where g concentrates at p_F.
        let g = gas(0.001);
        let pf = g.p_fermi();
        let rect = RectangleSpec::new(1.5 * pf, 0.001, 2.5 * pf, 0.004).unwrap();
        let v = rectangle_reference(&rect, &g, &cfg()).unwrap().value;
        let anti = |y: f64| {
            let y = Complex64::new(y, 0.0);
            let i = Complex64::i();
            -(y * y / 2.0 - 2.0 * i * pf * y + 4.0 * pf * pf * (y - 2.0 * i * pf).ln()) / (8.0 * PI)
        };
        let expected = -Complex64::i() * (anti(0.004) - anti(0.001));
        assert!((v - expected).norm() < 1e-3 * expected.norm(), "{v} vs {expected}");
    }

    #[test]
    fn estimate_jump_sees_only_discontinuity() {
        let f = |x: f64| -> Result<Complex64> {
            let smooth = (3.0 * x).sin() + x * x;
            Ok(Complex64::new(if x > 1.0 { smooth + 0.25 } else { smooth }, 0.0))
        };
        let j = estimate_jump(f, 1.0, 1e-4).unwrap();
        assert!((j.re - 0.25).abs() < 1e-10);
        let g = |x: f64| -> Result<Complex64> { Ok(Complex64::new(x.exp(), 0.0)) };
        assert!(estimate_jump(g, 0.3, 1e-3).unwrap().norm() < 1e-8);
        assert!(estimate_jump(g, 0.3, 0.0).is_err());
    }

    #[test]
    fn profile_shape_and_degenerate_width() {
        let g = gas(0.01);
        let pf = g.p_fermi();
        let rows = continuity_profile(2.0 * pf, 0.001, 0.0, 5, &g, &cfg()).unwrap();
        assert_eq!(rows.len(), 5);
        assert!(rows.windows(2).all(|w| w[0] == w[1]));
        let rows = continuity_profile(2.0 * pf, 0.001, 0.2 * pf, 7, &g, &cfg()).unwrap();
        assert_eq!(rows[3].x, 2.0 * pf);
        assert!(rows[3].chi0.is_none());
        assert!(rows[2].chi0.is_some());
        assert!(continuity_profile(2.0 * pf, 0.001, 0.2 * pf, 2, &g, &cfg()).is_err());
    }
}
