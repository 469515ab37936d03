//! Physical state of the electron gas.
//!
//! Units: ħ = c = 1 and the electron mass m = 1, so momenta and energies are
//! both measured in units of m. The coupling is λ = 4πe² with e² = α.

use std::f64::consts::PI;

use crate::quad::{integrate_pieces, QuadValue, QuadratureConfig, QuadratureResult};
use crate::roots::brent;
use crate::{Error, Result};

/// Fine-structure constant (CODATA 2018).
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;

/// Half-width of the thermal window in units of `(ε - μ)/2T`; the weight
/// `g(p)` is below `e^-80` outside it.
pub const THERMAL_WINDOW: f64 = 40.0;

/// How the chemical potential is fixed at finite temperature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MuMode {
    /// Density held at its `T = 0` value.
    #[default]
    Solved,
    /// `μ = ε_F` regardless of temperature.
    FixedAtFermiEnergy,
}

/// Immutable description of the electron gas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectronGas {
    r_s: f64,
    t_over_tf: f64,
    temperature: f64,
    p_fermi: f64,
    e_fermi: f64,
    mu: f64,
    e2: f64,
    lambda: f64,
    mu_mode: MuMode,
}

impl ElectronGas {
    /// Builds the gas for density parameter `r_s` (Bohr radii) at
    /// temperature `t_over_tf` (units of the Fermi temperature).
    pub fn derive(r_s: f64, t_over_tf: f64, mu_mode: MuMode) -> Result<Self> {
        if !(r_s > 0.0 && r_s.is_finite()) {
            return Err(Error::Domain(format!("r_s must be positive, got {r_s}")));
        }
        if !(t_over_tf >= 0.0 && t_over_tf.is_finite()) {
            return Err(Error::Domain(format!(
                "T/T_F must be non-negative, got {t_over_tf}"
            )));
        }
        let p_fermi = fermi_momentum(r_s);
        let e_fermi = 0.5 * p_fermi * p_fermi;
        let temperature = t_over_tf * e_fermi;
        let mu = match mu_mode {
            _ if temperature == 0.0 => e_fermi,
            MuMode::FixedAtFermiEnergy => e_fermi,
            MuMode::Solved => chemical_potential(p_fermi, temperature)?,
        };
        Ok(ElectronGas {
            r_s,
            t_over_tf,
            temperature,
            p_fermi,
            e_fermi,
            mu,
            e2: FINE_STRUCTURE,
            lambda: 4.0 * PI * FINE_STRUCTURE,
            mu_mode,
        })
    }

    /// Same gas with a different coupling λ (e² follows as λ/4π).
    pub fn with_coupling(self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!("coupling must be positive, got {lambda}")));
        }
        Ok(ElectronGas {
            lambda,
            e2: lambda / (4.0 * PI),
            ..self
        })
    }

    pub fn r_s(&self) -> f64 {
        self.r_s
    }
    pub fn t_over_tf(&self) -> f64 {
        self.t_over_tf
    }
    /// Temperature in units of m.
    pub fn temperature(&self) -> f64 {
        self.temperature
    }
    pub fn p_fermi(&self) -> f64 {
        self.p_fermi
    }
    pub fn e_fermi(&self) -> f64 {
        self.e_fermi
    }
    /// Fermi temperature (equal to ε_F with k_B = 1).
    pub fn t_fermi(&self) -> f64 {
        self.e_fermi
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    /// Squared electron charge.
    pub fn e2(&self) -> f64 {
        self.e2
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn mu_mode(&self) -> MuMode {
        self.mu_mode
    }

    pub fn require_finite_temperature(&self, what: &str) -> Result<()> {
        if self.temperature > 0.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{what} requires T > 0 (thermal quadrature over g(p)); got T = 0"
            )))
        }
    }

    /// Fermi-Dirac occupation f(p). At `T = 0` this is the step function,
    /// one half exactly at the Fermi surface.
    pub fn fermi_occupation(&self, p: f64) -> f64 {
        if self.temperature == 0.0 {
            return match p.partial_cmp(&self.p_fermi) {
                Some(std::cmp::Ordering::Less) => 1.0,
                Some(std::cmp::Ordering::Equal) => 0.5,
                _ => 0.0,
            };
        }
        fermi_dirac((0.5 * p * p - self.mu) / self.temperature)
    }

    /// Thermal weight g(p) = -∂f/∂p = p/(4T) sech²((ε - μ)/2T).
    pub fn thermal_weight(&self, p: f64) -> f64 {
        if self.temperature == 0.0 {
            return 0.0;
        }
        let a = (0.5 * p * p - self.mu) / (2.0 * self.temperature);
        p / (4.0 * self.temperature) * sech2(a)
    }

    /// Momenta bounding the thermal window `|ε - μ|/2T <= 40`, clipped at 0.
    pub fn support(&self) -> (f64, f64) {
        let half = 2.0 * THERMAL_WINDOW * self.temperature;
        let lo = (2.0 * (self.mu - half)).max(0.0).sqrt();
        let hi = (2.0 * (self.mu + half)).max(0.0).sqrt();
        (lo, hi)
    }

    /// Particle density from the occupation, n = (1/π²) ∫ p² f(p) dp.
    pub fn density(&self) -> Result<f64> {
        if self.temperature == 0.0 {
            return Ok(target_density(self.p_fermi));
        }
        density_at(self.mu, self.temperature)
    }

    fn momentum_at(&self, u: f64) -> f64 {
        (2.0 * (self.mu + 2.0 * self.temperature * u)).max(0.0).sqrt()
    }

    fn u_at(&self, p: f64) -> f64 {
        (0.5 * p * p - self.mu) / (2.0 * self.temperature)
    }

    /// Computes `∫ dp g(p) h(p)` over the thermal window, optionally
    /// restricted to `p ∈ [lo, hi]`.
    ///
    /// The integral is taken in the variable `u = (ε - μ)/2T`, where the
    /// weight becomes `sech²(u)/2` independently of temperature. `splits`
    /// lists momenta at which `h` jumps or has a kink.
    pub fn thermal_integral<V, F>(
        &self,
        h: F,
        window: Option<(f64, f64)>,
        splits: &[f64],
        cfg: &QuadratureConfig,
    ) -> Result<QuadratureResult<V>>
    where
        V: QuadValue,
        F: Fn(f64) -> V,
    {
        self.require_finite_temperature("thermal integral")?;
        let mut u_lo = (-THERMAL_WINDOW).max(-self.mu / (2.0 * self.temperature));
        let mut u_hi = THERMAL_WINDOW;
        if let Some((p_a, p_b)) = window {
            if p_b <= p_a {
                return Ok(QuadratureResult {
                    value: V::zero(),
                    err_estimate: 0.0,
                    evals: 0,
                    converged: true,
                });
            }
            u_lo = u_lo.max(self.u_at(p_a.max(0.0)));
            u_hi = u_hi.min(self.u_at(p_b));
        }
        if u_hi <= u_lo {
            return Ok(QuadratureResult {
                value: V::zero(),
                err_estimate: 0.0,
                evals: 0,
                converged: true,
            });
        }
        let mut points = vec![u_lo];
        let mut interior: Vec<f64> = splits
            .iter()
            .map(|&p| self.u_at(p))
            .filter(|&u| u > u_lo && u < u_hi)
            .collect();
        interior.sort_by(f64::total_cmp);
        interior.dedup();
        points.extend(interior);
        points.push(u_hi);

        Ok(integrate_pieces(
            |u: f64| h(self.momentum_at(u)) * (0.5 * sech2(u)),
            &points,
            cfg,
        ))
    }
}

/// Fermi momentum p_F = (9π/4)^{1/3} α / r_s in units of m.
pub fn fermi_momentum(r_s: f64) -> f64 {
    (9.0 * PI / 4.0).cbrt() * FINE_STRUCTURE / r_s
}

fn target_density(p_fermi: f64) -> f64 {
    p_fermi.powi(3) / (3.0 * PI * PI)
}

/// 1/(1 + e^x) without overflow.
fn fermi_dirac(x: f64) -> f64 {
    if x > 700.0 {
        0.0
    } else if x < -700.0 {
        1.0
    } else if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// sech²(a), exactly zero once |a| > 400.
fn sech2(a: f64) -> f64 {
    let a = a.abs();
    if a > 400.0 {
        return 0.0;
    }
    let e = (-2.0 * a).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

fn density_cfg() -> QuadratureConfig {
    QuadratureConfig {
        abs_tol: 1e-300,
        rel_tol: 1e-13,
        max_evals: 200_000,
        ..Default::default()
    }
}

fn density_at(mu: f64, temperature: f64) -> Result<f64> {
    let top = mu.max(0.0) + 60.0 * temperature;
    let p_max = (2.0 * top).sqrt();
    let mut points = vec![0.0];
    for e in [mu - 10.0 * temperature, mu, mu + 10.0 * temperature] {
        if e > 0.0 && e < top {
            points.push((2.0 * e).sqrt());
        }
    }
    points.push(p_max);
    let r = integrate_pieces(
        |p: f64| p * p * fermi_dirac((0.5 * p * p - mu) / temperature),
        &points,
        &density_cfg(),
    );
    Ok(r.require_converged("density integral")?.value / (PI * PI))
}

/// Chemical potential holding the density at `p_F³/3π²` for temperature
/// `temperature > 0` (both in units of m).
pub fn chemical_potential(p_fermi: f64, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) {
        return Err(Error::Domain(format!(
            "chemical potential solve needs T > 0, got {temperature}"
        )));
    }
    let e_fermi = 0.5 * p_fermi * p_fermi;
    let target = target_density(p_fermi);
    let residual = |mu: f64| density_at(mu, temperature).map(|n| n / target - 1.0);
    let lo = -50.0 * temperature - 10.0 * e_fermi;
    let hi = 10.0 * e_fermi;
    brent(residual, lo, hi, 1e-16 * e_fermi, 1e-13)
}
