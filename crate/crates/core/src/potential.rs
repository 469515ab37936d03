//! Screened potential of a static point impurity,
//! `V(r) = (e²/πr) I(r)` with `I(r) = ∫_{-∞}^{∞} q sin(qr)/ν(q) dq`.
//!
//! Routes to `I(r)`:
//!
//! * direct: oscillatory quadrature along the real axis. Includes every
//!   contribution, the Debye pole among them.
//! * contour: the real axis folded around the smeared cuts,
//!   `I = -2 ∫ dp g(p) ∫ dy e^{-yr} Re[q e^{2ipr} λΔχ⁰(y, p)/ν(q)²]` with
//!   `q = 2p + iy`. The Debye pole is left out.
//! * asymptotic: the small-`y` reduction of the contour route,
//!   `I ≈ (λ/πr²) ∫ dp g(p) p cos(2pr)/ν(2p)²`.
//! * closed form: the asymptotic route with `g` treated to leading order in
//!   `T`, `V ≈ 8e⁴T cos(2p_F r)/(r² ν(2p_F)² sinh(2πTr/p_F))`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::gas::ElectronGas;
use crate::polarizability::{chi0_cut_limit, chi0_complex, chi0_jump, chi_t, Cut, CutSide};
use crate::quad::{
    integrate_adaptive, integrate_decaying, integrate_oscillatory_settled, Oscillator, QuadratureConfig,
    QuadratureResult, Trap,
};
use crate::roots::brent;
use crate::{Error, Result};

/// Route used for `V(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Direct,
    Contour,
    Asymptotic,
    ClosedForm,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Direct, Method::Contour, Method::Asymptotic, Method::ClosedForm];

    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Contour => "contour",
            Method::Asymptotic => "asymptotic",
            Method::ClosedForm => "closed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialEntry {
    pub r: f64,
    pub v: f64,
    pub method: Method,
    pub err: f64,
}

/// `V(r)` samples ordered by `r`, then by method.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PotentialProfile {
    pub entries: Vec<PotentialEntry>,
}

impl PotentialProfile {
    /// Samples of one method, in increasing `r`.
    pub fn series(&self, method: Method) -> Vec<(f64, f64)> {
        self.entries
            .iter()
            .filter(|e| e.method == method)
            .map(|e| (e.r, e.v))
            .collect()
    }
}

/// Zero of `ν` on the positive imaginary axis, `q = i y_D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DebyePole {
    pub y_d: f64,
    /// `|ν(i y_D)|`
    pub residual: f64,
    /// `d ν(iy)/dy` at `y_D`, by centred differences.
    pub slope: f64,
}

impl DebyePole {
    /// Contribution of the pole to `I(r)`, `-2π y_D e^{-y_D r}/ν'(y_D)`.
    pub fn contribution(&self, r: f64) -> f64 {
        -2.0 * PI * self.y_d * (-self.y_d * r).exp() / self.slope
    }
}

/// Result of comparing both sides of the power identity
/// `∫_C q e^{iqr} χᵀ(q)ⁿ dq = -2ni ∫ dp g ∫ dy e^{-yr} Re[q e^{2ipr} Δχ⁰ χᵀ(q)^{n-1}]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIdentity {
    pub lhs: Complex64,
    pub rhs: Complex64,
}

/// Numerical `J = ∫ g(p) cos(2pr) dp` against the closed kernel
/// `x cos(2p_F r)/sinh x`, `x = 2πTr/p_F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JKernel {
    pub numeric: f64,
    pub closed: f64,
}

/// Tolerances for a quadrature nested inside another: the inner values must
/// be smooth to well below the outer tolerance.
fn nested(cfg: &QuadratureConfig) -> QuadratureConfig {
    QuadratureConfig {
        abs_tol: cfg.abs_tol * 1e-3,
        rel_tol: (cfg.rel_tol * 1e-3).max(1e-13),
        ..*cfg
    }
}

fn check_r(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("distance r must be positive, got {r}")))
    }
}

/// Locates the Debye pole. At `T = 0` the kernel uses `χ⁰(·, p_F)`.
pub fn debye_pole(gas: &ElectronGas, cfg: &QuadratureConfig) -> Result<DebyePole> {
    let lambda = gas.lambda();
    let p_f = gas.p_fermi();
    let tight = QuadratureConfig {
        abs_tol: 1e-300,
        rel_tol: cfg.rel_tol.min(1e-13),
        ..*cfg
    };
    let chi = |y: f64| -> Result<Complex64> {
        let q = Complex64::new(0.0, y);
        if gas.temperature() == 0.0 {
            chi0_complex(q, p_f)
        } else {
            Ok(chi_t(q, gas, &tight)?.value)
        }
    };
    let nu = |y: f64| -> Result<Complex64> { Ok(Complex64::new(-y * y, 0.0) - chi(y)? * lambda) };
    let h = |y: f64| -> Result<f64> { Ok(nu(y)?.re) };

    let nu0 = h(0.0)?;
    let mut trace = vec![(0.0, nu0)];
    let mut y_max = 10.0 * (lambda * p_f).sqrt() / PI;
    let mut bracket = None;
    'scan: for _ in 0..6 {
        let steps = 40;
        let start = trace.last().map(|t| t.0).unwrap_or(0.0);
        for k in 1..=steps {
            let y = start + (y_max - start) * k as f64 / steps as f64;
            let v = h(y)?;
            let prev = *trace.last().unwrap();
            trace.push((y, v));
            if v.signum() != prev.1.signum() {
                bracket = Some((prev.0, y));
                break 'scan;
            }
        }
        y_max *= 2.0;
    }
    let Some((lo, hi)) = bracket else {
        return Err(Error::NoPole { trace });
    };
    let y_d = brent(h, lo, hi, 1e-15 * hi, 1e-13 * nu0.abs())?;
    let residual = nu(y_d)?.norm();
    let step = 1e-6 * y_d;
    let slope = (h(y_d + step)? - h(y_d - step)?) / (2.0 * step);
    Ok(DebyePole { y_d, residual, slope })
}

/// Potential of a static impurity in a given electron gas.
///
/// Quantities that depend only on the gas (`ν(2p_F)`, the Debye pole) are
/// computed on first use and reused.
#[derive(Debug)]
pub struct ScreenedPotential {
    gas: ElectronGas,
    cfg: QuadratureConfig,
    nu_2pf: OnceLock<f64>,
    pole: OnceLock<DebyePole>,
}

impl ScreenedPotential {
    pub fn new(gas: ElectronGas, cfg: QuadratureConfig) -> Result<Self> {
        Ok(ScreenedPotential {
            gas,
            cfg: cfg.validated()?,
            nu_2pf: OnceLock::new(),
            pole: OnceLock::new(),
        })
    }

    pub fn gas(&self) -> &ElectronGas {
        &self.gas
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    fn chi_real(&self, q: f64, cfg: &QuadratureConfig) -> Result<f64> {
        Ok(chi_t(Complex64::new(q, 0.0), &self.gas, cfg)?.value.re)
    }

    fn nu_complex(&self, q: Complex64, cfg: &QuadratureConfig) -> Result<Complex64> {
        Ok(q * q - chi_t(q, &self.gas, cfg)?.value * self.gas.lambda())
    }

    /// `ν(2p_F)` at the gas temperature.
    pub fn nu_2pf(&self) -> Result<f64> {
        if let Some(v) = self.nu_2pf.get() {
            return Ok(*v);
        }
        self.gas.require_finite_temperature("nu(2 p_F)")?;
        let q = 2.0 * self.gas.p_fermi();
        let v = q * q - self.gas.lambda() * self.chi_real(q, &nested(&self.cfg))?;
        Ok(*self.nu_2pf.get_or_init(|| v))
    }

    pub fn debye_pole(&self) -> Result<DebyePole> {
        if let Some(p) = self.pole.get() {
            return Ok(*p);
        }
        let p = debye_pole(&self.gas, &self.cfg)?;
        Ok(*self.pole.get_or_init(|| p))
    }

    /// `I(r)` from the real-axis integral.
    ///
    /// Writing `q/ν = 1/q + λχᵀ/(qν)`, the first piece gives exactly `π`; the
    /// remainder falls off as `q⁻⁵` and is integrated lobe by lobe.
    pub fn i_direct(&self, r: f64) -> Result<QuadratureResult<f64>> {
        check_r(r)?;
        self.gas.require_finite_temperature("direct quadrature of I(r)")?;
        let lambda = self.gas.lambda();
        let inner = nested(&self.cfg);
        let trap = Trap::new();
        let f = |q: f64| {
            let chi = trap.catch(self.chi_real(q, &inner));
            let nu = q * q - lambda * chi;
            (q * r).sin() * lambda * chi / (q * nu)
        };
        // Extrapolation must not start before the smeared Kohn feature.
        let (_, p_hi) = self.gas.support();
        let settle = 3.0 * p_hi + 10.0 * PI / r;
        let tail = integrate_oscillatory_settled(f, 0.0, r, Oscillator::Sin, settle, &self.cfg);
        trap.check()?;
        let tail = tail.require_converged("direct quadrature of I(r)")?;
        Ok(QuadratureResult {
            value: PI + 2.0 * tail.value,
            err_estimate: 2.0 * tail.err_estimate,
            ..tail
        })
    }

    /// `I(r)` from the cut-folded double integral, without the Debye pole.
    pub fn i_contour(&self, r: f64) -> Result<QuadratureResult<f64>> {
        check_r(r)?;
        self.gas.require_finite_temperature("contour form of I(r)")?;
        let lambda = self.gas.lambda();
        let inner_cfg = self.cfg.scaled(0.1);
        let chi_cfg = nested(&self.cfg);
        let trap = Trap::new();
        let outer = self.gas.thermal_integral(
            |p: f64| {
                let phase = Complex64::from_polar(1.0, 2.0 * p * r);
                let integrand = |y: f64| {
                    if y == 0.0 {
                        return 0.0;
                    }
                    let q = Complex64::new(2.0 * p, y);
                    let nu = trap.catch(self.nu_complex(q, &chi_cfg));
                    let w = q * phase * lambda * chi0_jump(y, p) / (nu * nu);
                    (-y * r).exp() * w.re
                };
                let inner = integrate_decaying(integrand, 0.0, r, &inner_cfg)
                    .and_then(|v| v.require_converged("contour form of I(r), inner y integral"));
                trap.catch(inner.map(|v| v.value))
            },
            None,
            &[],
            &self.cfg,
        );
        trap.check()?;
        let outer = outer?.require_converged("contour form of I(r)")?;
        Ok(outer.map(|v| -2.0 * v))
    }

    /// `I(r) ≈ (λ/πr²) ∫ dp g(p) p cos(2pr)/ν(2p)²`.
    pub fn i_asymptotic(&self, r: f64) -> Result<QuadratureResult<f64>> {
        check_r(r)?;
        self.gas.require_finite_temperature("asymptotic form of I(r)")?;
        let lambda = self.gas.lambda();
        let chi_cfg = nested(&self.cfg);
        let trap = Trap::new();
        let integral = self.gas.thermal_integral(
            |p: f64| {
                let q = 2.0 * p;
                let nu = q * q - lambda * trap.catch(self.chi_real(q, &chi_cfg));
                p * (q * r).cos() / (nu * nu)
            },
            None,
            &[],
            &self.cfg,
        );
        trap.check()?;
        let scale = lambda / (PI * r * r);
        let integral = integral?.require_converged("asymptotic form of I(r)")?;
        Ok(QuadratureResult {
            value: scale * integral.value,
            err_estimate: scale * integral.err_estimate,
            ..integral
        })
    }

    fn thermal_argument(&self, r: f64) -> f64 {
        2.0 * PI * self.gas.temperature() * r / self.gas.p_fermi()
    }

    /// `x/sinh x`, continuous at 0.
    fn x_over_sinh(x: f64) -> f64 {
        if x.abs() < 1e-4 {
            1.0 - x * x / 6.0
        } else {
            x / x.sinh()
        }
    }

    /// Low-temperature Friedel tail,
    /// `V ≈ 8e⁴T cos(2p_F r)/(r² ν(2p_F)² sinh(2πTr/p_F))`.
    pub fn v_friedel_low_t(&self, r: f64) -> Result<f64> {
        Ok(self.friedel_envelope(r)? * (2.0 * self.gas.p_fermi() * r).cos())
    }

    /// Amplitude of [`Self::v_friedel_low_t`] without the cosine.
    pub fn friedel_envelope(&self, r: f64) -> Result<f64> {
        check_r(r)?;
        self.gas.require_finite_temperature("low-temperature Friedel form")?;
        let nu = self.nu_2pf()?;
        let e2 = self.gas.e2();
        let x = self.thermal_argument(r);
        // 8e⁴T/(r² ν² sinh x) = 4e⁴ p_F/(π r³ ν²) · x/sinh x
        Ok(4.0 * e2 * e2 * self.gas.p_fermi() / (PI * r.powi(3) * nu * nu) * Self::x_over_sinh(x))
    }

    pub fn j_kernel_check(&self, r: f64) -> Result<JKernel> {
        check_r(r)?;
        self.gas.require_finite_temperature("Friedel kernel")?;
        let numeric = self
            .gas
            .thermal_integral(|p: f64| (2.0 * p * r).cos(), None, &[], &self.cfg)?
            .require_converged("Friedel kernel")?
            .value;
        let closed = Self::x_over_sinh(self.thermal_argument(r)) * (2.0 * self.gas.p_fermi() * r).cos();
        Ok(JKernel { numeric, closed })
    }

    /// Both sides of the power identity for `n ∈ {1, 2}`.
    ///
    /// The left side follows the real axis folded up around the cuts at
    /// `±2p` of every shell: for each cut, up the right bank and down the
    /// left bank to the closing height `60/r`, using the one-sided values of
    /// `χ⁰` on each bank. With `n` factors of `χᵀ`, each factor's cuts are
    /// wrapped in turn, which gives the factor `n`. The right side uses the
    /// closed-form jump.
    pub fn power_identity_check(&self, n: u32, r: f64) -> Result<PowerIdentity> {
        check_r(r)?;
        self.gas.require_finite_temperature("power identity")?;
        if !(1..=2).contains(&n) {
            return Err(Error::Domain(format!("power identity implemented for n = 1, 2; got {n}")));
        }
        let lhs = self.power_identity_lhs(n, r)?;
        let rhs = self.power_identity_rhs(n, r)?;
        Ok(PowerIdentity { lhs, rhs })
    }

    fn chi_power(&self, q: Complex64, n: u32, cfg: &QuadratureConfig) -> Result<Complex64> {
        if n == 1 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        Ok(chi_t(q, &self.gas, cfg)?.value.powu(n - 1))
    }

    fn power_identity_lhs(&self, n: u32, r: f64) -> Result<Complex64> {
        let y_max = 60.0 / r;
        let i = Complex64::i();
        let chi_cfg = nested(&self.cfg);
        let inner_cfg = self.cfg.scaled(0.1);
        let trap = Trap::new();
        let outer = self.gas.thermal_integral(
            |p: f64| {
                let mut total = Complex64::new(0.0, 0.0);
                for (cut, x) in [(Cut::AtPlus2p, 2.0 * p), (Cut::AtMinus2p, -2.0 * p)] {
                    // right bank upward (+i dy), left bank downward (-i dy)
                    for (side, sign) in [(CutSide::Minus, 1.0), (CutSide::Plus, -1.0)] {
                        let bank = integrate_adaptive(
                            |y: f64| {
                                let q = Complex64::new(x, y);
                                let chi0 = trap.catch(chi0_cut_limit(side, cut, y, p));
                                let rest = trap.catch(self.chi_power(q, n, &chi_cfg));
                                q * (i * q * r).exp() * chi0 * rest
                            },
                            0.0,
                            y_max,
                            &inner_cfg,
                        );
                        total += i * sign * bank.value;
                    }
                }
                total
            },
            None,
            &[],
            &self.cfg,
        );
        trap.check()?;
        Ok(outer?.value * n as f64)
    }

    fn power_identity_rhs(&self, n: u32, r: f64) -> Result<Complex64> {
        let chi_cfg = nested(&self.cfg);
        let inner_cfg = self.cfg.scaled(0.1);
        let trap = Trap::new();
        let outer = self.gas.thermal_integral(
            |p: f64| {
                let phase = Complex64::from_polar(1.0, 2.0 * p * r);
                let integrand = |y: f64| {
                    let q = Complex64::new(2.0 * p, y);
                    let rest = trap.catch(self.chi_power(q, n, &chi_cfg));
                    (-y * r).exp() * (q * phase * chi0_jump(y, p) * rest).re
                };
                let inner = integrate_decaying(integrand, 0.0, r, &inner_cfg);
                trap.catch(inner.map(|v| v.value))
            },
            None,
            &[],
            &self.cfg,
        );
        trap.check()?;
        let outer = outer?.require_converged("power identity, right side")?;
        Ok(Complex64::new(0.0, -2.0 * n as f64) * outer.value)
    }

    /// `∫_{-∞}^{∞} q e^{iqr} χᵀ(q)ⁿ dq` straight along the real axis, an
    /// independent check of the folded contour. Even `χᵀ` reduces it to
    /// `2i ∫₀^∞ q sin(qr) χᵀ(q)ⁿ dq`.
    pub fn power_real_line(&self, n: u32, r: f64) -> Result<QuadratureResult<Complex64>> {
        check_r(r)?;
        self.gas.require_finite_temperature("power identity, real line")?;
        let chi_cfg = nested(&self.cfg);
        let trap = Trap::new();
        let f = |q: f64| {
            let chi = trap.catch(self.chi_real(q, &chi_cfg));
            q * (q * r).sin() * chi.powi(n as i32)
        };
        let (_, p_hi) = self.gas.support();
        let settle = 3.0 * p_hi + 10.0 * PI / r;
        let res = integrate_oscillatory_settled(f, 0.0, r, Oscillator::Sin, settle, &self.cfg);
        trap.check()?;
        Ok(res
            .require_converged("power identity, real line")?
            .map(|v| Complex64::new(0.0, 2.0 * v)))
    }

    /// `V(r) = (e²/πr) I(r)` by the chosen route.
    pub fn v_of_r(&self, r: f64, method: Method) -> Result<QuadratureResult<f64>> {
        check_r(r)?;
        if method == Method::ClosedForm {
            return Ok(QuadratureResult {
                value: self.v_friedel_low_t(r)?,
                err_estimate: 0.0,
                evals: 0,
                converged: true,
            });
        }
        let i = match method {
            Method::Direct => self.i_direct(r)?,
            Method::Contour => self.i_contour(r)?,
            Method::Asymptotic => self.i_asymptotic(r)?,
            Method::ClosedForm => unreachable!(),
        };
        let scale = self.gas.e2() / (PI * r);
        Ok(QuadratureResult {
            value: scale * i.value,
            err_estimate: scale * i.err_estimate,
            ..i
        })
    }

    /// `V` on every `r` (strictly increasing) for every listed method.
    /// Points are computed in parallel and assembled in order.
    pub fn profile(&self, rs: &[f64], methods: &[Method]) -> Result<PotentialProfile> {
        if rs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("profile radii must be strictly increasing".into()));
        }
        let mut methods = methods.to_vec();
        methods.sort();
        methods.dedup();
        let jobs: Vec<(f64, Method)> = rs
            .iter()
            .flat_map(|&r| methods.iter().map(move |&m| (r, m)))
            .collect();
        let entries = jobs
            .par_iter()
            .map(|&(r, method)| {
                let v = self.v_of_r(r, method)?;
                Ok(PotentialEntry { r, v: v.value, method, err: v.err_estimate })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PotentialProfile { entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::MuMode;

    fn solver(t: f64) -> ScreenedPotential {
        let gas = ElectronGas::derive(3.0, t, MuMode::Solved).unwrap();
        ScreenedPotential::new(gas, QuadratureConfig::default()).unwrap()
    }

    #[test]
    fn x_over_sinh_is_smooth_at_origin() {
        assert_eq!(ScreenedPotential::x_over_sinh(0.0), 1.0);
        for x in [0.999e-4f64, 1.001e-4, 3e-3] {
            let series = 1.0 - x * x / 6.0 + 7.0 * x.powi(4) / 360.0;
            assert!((ScreenedPotential::x_over_sinh(x) - series).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_radius_and_cold_gas() {
        let s = solver(0.01);
        assert!(s.i_direct(0.0).is_err());
        assert!(s.i_contour(-1.0).is_err());
        let cold = solver(0.0);
        assert!(cold.i_direct(100.0).is_err());
        assert!(cold.v_of_r(100.0, Method::ClosedForm).is_err());
        assert!(s.power_identity_check(3, 100.0).is_err());
    }

    #[test]
    fn pole_contribution_of_a_yukawa_kernel() {
        // ν = q² + κ² has h(y) = κ² - y², h' = -2κ; the pole gives π e^{-κr}.
        let kappa = 0.3;
        let pole = DebyePole { y_d: kappa, residual: 0.0, slope: -2.0 * kappa };
        let r = 2.0;
        assert!((pole.contribution(r) - PI * (-kappa * r).exp()).abs() < 1e-15);
    }

    #[test]
    fn debye_pole_at_zero_temperature_matches_closed_form_kernel() {
        // Oracle: on the imaginary axis χ⁰(iy) = -p/2π² - (y²+4p²) atan(y/2p)/(4π²y).
        let s = solver(0.0);
        let pole = s.debye_pole().unwrap();
        let (p, lambda) = (s.gas().p_fermi(), s.gas().lambda());
        let h = |y: f64| -y * y + lambda * (p / (2.0 * PI * PI) + (y * y + 4.0 * p * p) * (y / (2.0 * p)).atan() / (4.0 * PI * PI * y));
        assert!(h(pole.y_d).abs() < 1e-10 * h(1e-12));
        assert!(pole.residual < 1e-10 * h(1e-12));
        assert!(pole.slope < 0.0);
    }

    #[test]
    fn thomas_fermi_position_emerges_at_weak_coupling() {
        // y_D/p_F = √(λ/p_F)/π · F with F → 1 as y_D/p_F → 0; a much denser
        // gas (small r_s) pushes the pole towards the Thomas–Fermi value.
        for (r_s, tol) in [(0.01, 2e-3), (0.1, 2e-2)] {
            let gas = ElectronGas::derive(r_s, 0.0, MuMode::Solved).unwrap();
            let pole = debye_pole(&gas, &QuadratureConfig::default()).unwrap();
            let tf = (gas.p_fermi() * gas.lambda()).sqrt() / PI;
            assert!((pole.y_d / tf - 1.0).abs() < tol, "r_s={r_s}: {}", pole.y_d / tf);
        }
    }

    #[test]
    fn debye_pole_is_found_at_finite_temperature() {
        let s = solver(0.01);
        let pole = s.debye_pole().unwrap();
        let nu0 = s.gas().lambda() * -chi_t(Complex64::new(0.0, 0.0), s.gas(), &QuadratureConfig::default()).unwrap().value.re;
        assert!(pole.residual < 1e-10 * nu0, "{} vs {}", pole.residual, nu0);
    }

    #[test]
    fn closed_form_zero_crossings() {
        let s = solver(0.01);
        let p_f = s.gas().p_fermi();
        for k in 10..14 {
            let r = (PI / 2.0 + k as f64 * PI) / (2.0 * p_f);
            let v = s.v_friedel_low_t(r).unwrap();
            assert!(v.abs() < 1e-12 * s.friedel_envelope(r).unwrap());
        }
    }

    #[test]
    fn closed_form_cold_limit_is_inverse_cube() {
        let s = solver(1e-5);
        let (p_f, e2) = (s.gas().p_fermi(), s.gas().e2());
        let nu = s.nu_2pf().unwrap();
        for r in [10.0 / p_f, 33.3 / p_f] {
            let v = s.v_friedel_low_t(r).unwrap();
            let cube = 4.0 * e2 * e2 * p_f * (2.0 * p_f * r).cos() / (PI * r.powi(3) * nu * nu);
            assert!((v / cube - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn kernel_limits_at_short_distance() {
        let s = solver(0.01);
        let j = s.j_kernel_check(1e-9).unwrap();
        assert!((j.closed - 1.0).abs() < 1e-9);
        let f0 = s.gas().fermi_occupation(0.0);
        assert!((j.numeric - f0).abs() < 1e-9);
    }

    #[test]
    fn unscreened_limit_is_bare_coulomb() {
        let gas = ElectronGas::derive(3.0, 0.01, MuMode::Solved).unwrap().with_coupling(1e-20).unwrap();
        let s = ScreenedPotential::new(gas, QuadratureConfig::default()).unwrap();
        let r = 1000.0;
        let v = s.v_of_r(r, Method::Direct).unwrap().value;
        let coulomb = gas.e2() / r;
        assert!((v / coulomb - 1.0).abs() < 1e-6);
    }

    #[test]
    fn profile_requires_increasing_radii() {
        let s = solver(0.01);
        assert!(s.profile(&[2.0, 1.0], &[Method::ClosedForm]).is_err());
        let p = s.profile(&[1000.0, 2000.0], &[Method::ClosedForm, Method::ClosedForm]).unwrap();
        assert_eq!(p.entries.len(), 2);
        assert_eq!(p.series(Method::ClosedForm).len(), 2);
    }
}
