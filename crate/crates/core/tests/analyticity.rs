use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thermoscreen::analyticity::{
    continuity_profile, rectangle_integral_chi_t, rectangle_reference, Orientation, RectangleSpec,
};
use thermoscreen::{ElectronGas, MuMode, QuadratureConfig};

fn gas(t: f64) -> ElectronGas {
    ElectronGas::derive(3.0, t, MuMode::Solved).unwrap()
}

// Random first-quadrant rectangles: the loop integral of χᵀ equals the cut
// superposition, whether or not the rectangle touches the thermal support.
#[test]
fn random_rectangles_match_reference() {
    let g = gas(0.01);
    let cfg = QuadratureConfig::default();
    let p_f = g.p_fermi();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let x0 = p_f * rng.gen_range(0.2..2.0);
        let x1 = x0 + p_f * rng.gen_range(0.1..2.0);
        let y0 = p_f * rng.gen_range(0.05..0.5);
        let y1 = y0 + p_f * rng.gen_range(0.05..0.5);
        let rect = RectangleSpec::new(x0, y0, x1, y1).unwrap();
        let loop_ = rectangle_integral_chi_t(&rect, Orientation::Counterclockwise, &g, &cfg).unwrap();
        let reference = rectangle_reference(&rect, &g, &cfg).unwrap();
        let tol = 1e-10 + 10.0 * (loop_.err_estimate + reference.err_estimate);
        assert!((loop_.value - reference.value).norm() < tol, "{rect:?}: {} vs {}", loop_.value, reference.value);
        let cw = rectangle_integral_chi_t(&rect, Orientation::Clockwise, &g, &cfg).unwrap();
        assert!((cw.value + loop_.value).norm() < tol);
    }
}

// Max |Δχᵀ| between adjacent samples across 2p_F divided by the spacing
// grows as T falls: the slope steepens towards the T = 0 jump.
#[test]
fn gradient_steepens_as_temperature_falls() {
    let cfg = QuadratureConfig::default();
    let mut slopes = Vec::new();
    for t in [0.01, 0.003, 0.001, 0.0003] {
        let g = gas(t);
        let half = 1e-5 * g.p_fermi() / 0.01 * t;
        let prof = continuity_profile(2.0 * g.p_fermi(), 0.001 * g.p_fermi(), half, 21, &g, &cfg).unwrap();
        let slope = prof
            .windows(2)
            .map(|w| (w[1].chi_t - w[0].chi_t).norm() / (w[1].x - w[0].x))
            .fold(0.0, f64::max);
        slopes.push(slope);
    }
    assert!(slopes.windows(2).all(|w| w[1] > w[0]), "{slopes:?}");
}

#[test]
fn profile_reports_missing_chi0_on_cut() {
    let g = gas(0.01);
    let cfg = QuadratureConfig::default();
    let prof = continuity_profile(2.0 * g.p_fermi(), 0.0005, 1e-6, 5, &g, &cfg).unwrap();
    assert_eq!(prof.len(), 5);
    assert!(prof[2].chi0.is_none());
    assert!(prof.iter().enumerate().all(|(k, p)| k == 2 || p.chi0.is_some()));
    let lhs = prof[0].chi_t;
    assert!(lhs.im.abs() > 0.0 && lhs != Complex64::new(0.0, 0.0));
}
