use std::f64::consts::PI;

use thermoscreen::potential::{Method, ScreenedPotential};
use thermoscreen::{ElectronGas, MuMode, QuadratureConfig};

fn solver(t: f64) -> ScreenedPotential {
    ScreenedPotential::new(ElectronGas::derive(3.0, t, MuMode::Solved).unwrap(), QuadratureConfig::default()).unwrap()
}

fn radii(solver: &ScreenedPotential, from: f64, to: f64, n: usize) -> Vec<f64> {
    let two_pf = 2.0 * solver.gas().p_fermi();
    (0..n).map(|k| (from + (to - from) * k as f64 / (n - 1) as f64) / two_pf).collect()
}

// Zero crossings of V over [30, 80]/2p_F are spaced π/2p_F apart on
// average, for each route.
#[test]
fn friedel_period_from_zero_crossings() {
    let s = solver(0.001);
    let two_pf = 2.0 * s.gas().p_fermi();
    let rs = radii(&s, 30.0, 80.0, 201);
    let methods = [Method::Direct, Method::Asymptotic, Method::ClosedForm];
    let profile = s.profile(&rs, &methods).unwrap();
    for m in methods {
        let v: Vec<(f64, f64)> = profile.series(m);
        let crossings: Vec<f64> = v
            .windows(2)
            .filter(|w| w[0].1.signum() != w[1].1.signum())
            .map(|w| w[0].0 - w[0].1 * (w[1].0 - w[0].0) / (w[1].1 - w[0].1))
            .collect();
        assert!(crossings.len() >= 14, "{m:?}");
        let mean = (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64 * two_pf;
        assert!((mean / PI - 1.0).abs() < 0.01, "{m:?}: mean spacing {mean}");
    }
}

// Warmer gas, smaller tail.
#[test]
fn temperature_damps_the_tail() {
    let cold = solver(0.01);
    let warm = solver(0.02);
    for x in [40.0, 50.0, 60.0, 70.0, 80.0] {
        let r = x / (2.0 * cold.gas().p_fermi());
        let a = cold.friedel_envelope(r).unwrap();
        let b = warm.friedel_envelope(r).unwrap();
        assert!(b < a);
        let vc = cold.v_of_r(r, Method::Asymptotic).unwrap().value.abs();
        let vw = warm.v_of_r(r, Method::Asymptotic).unwrap().value.abs();
        assert!(vw < vc, "r = {r}: {vw} vs {vc}");
    }
}

// The direct and cut-resummed routes agree much better than the asymptotic
// forms, which drop subleading terms.
#[test]
fn direct_and_contour_agree_closely() {
    let s = solver(0.01);
    let r = 55.0 / (2.0 * s.gas().p_fermi());
    let d = s.i_direct(r).unwrap();
    let c = s.i_contour(r).unwrap();
    let amp = s.friedel_envelope(r).unwrap() * PI * r / s.gas().e2();
    assert!((d.value - c.value).abs() < 1e-4 * amp, "{} vs {}", d.value, c.value);
}

#[test]
fn power_identity_real_line_agrees() {
    let gas = ElectronGas::derive(3.0, 0.01, MuMode::Solved).unwrap();
    let cfg = QuadratureConfig { abs_tol: 1e-24, ..QuadratureConfig::default() };
    let s = ScreenedPotential::new(gas, cfg).unwrap();
    let r = 50.0 / (2.0 * gas.p_fermi());
    let id = s.power_identity_check(1, r).unwrap();
    let line = s.power_real_line(1, r).unwrap();
    assert!((line.value - id.rhs).norm() < 1e-3 * id.rhs.norm());
}

#[test]
fn zero_temperature_direct_route_is_refused() {
    let s = solver(0.0);
    assert!(s.v_of_r(10.0, Method::Direct).is_err());
}
