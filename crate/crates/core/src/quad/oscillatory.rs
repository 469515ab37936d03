use std::f64::consts::PI;

use super::{integrate_adaptive, wynn_epsilon, QuadValue, QuadratureConfig, QuadratureResult};

/// Which factor oscillates; fixes where the lobe boundaries (zeros) sit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oscillator {
    /// Zeros at `jπ/k`.
    Sin,
    /// Zeros at `(j + 1/2)π/k`.
    Cos,
}

impl Oscillator {
    fn offset(self) -> f64 {
        match self {
            Oscillator::Sin => 0.0,
            Oscillator::Cos => 0.5,
        }
    }
}

// Odd, so the last formed entry lands in an even column.
const WINDOW: usize = 21;
const MIN_SETTLED_LOBES: usize = 4;

/// Integrates `f` over `[a, ∞)` where `f(x) = s(x) osc(k x)`.
///
/// See [`integrate_oscillatory_settled`]; this variant allows convergence to
/// be declared as soon as a handful of lobes have been summed.
pub fn integrate_oscillatory<V, F>(
    f: F,
    a: f64,
    wavenumber: f64,
    kind: Oscillator,
    cfg: &QuadratureConfig,
) -> QuadratureResult<V>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    integrate_oscillatory_settled(f, a, wavenumber, kind, a, cfg)
}

/// Integrates `f` over `[a, ∞)` where `f(x) = s(x) osc(k x)` with `s`
/// eventually monotone and of one sign.
///
/// The half-line is cut at the zeros of `osc(k x)`; every lobe is integrated
/// adaptively and the partial sums are extrapolated with the epsilon
/// algorithm. Convergence is never declared before the lobes have passed
/// `settle`, which callers set beyond the last non-smooth feature of `s`
/// (the extrapolation would otherwise happily converge to a limit that has
/// not yet seen it).
pub fn integrate_oscillatory_settled<V, F>(
    f: F,
    a: f64,
    wavenumber: f64,
    kind: Oscillator,
    settle: f64,
    cfg: &QuadratureConfig,
) -> QuadratureResult<V>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    if !(wavenumber > 0.0 && wavenumber.is_finite()) {
        return QuadratureResult {
            value: V::zero(),
            err_estimate: f64::INFINITY,
            evals: 0,
            converged: false,
        };
    }
    let half_period = PI / wavenumber;
    let lobe_cfg = cfg.scaled(0.1);

    // First zero at or beyond `a`.
    let mut j = (a / half_period - kind.offset()).ceil();
    let zero_at = |j: f64| (j + kind.offset()) * half_period;
    let mut left = a;
    let mut right = zero_at(j);
    if right <= left {
        j += 1.0;
        right = zero_at(j);
    }

    let mut sum = V::zero();
    let mut quad_err = 0.0;
    let mut evals = 0usize;
    let mut partial_sums: Vec<V> = Vec::new();
    let mut estimates: Vec<V> = Vec::new();
    let mut last_terms: [f64; 2] = [f64::INFINITY; 2];
    let mut settled_lobes = 0usize;
    let mut best = V::zero();
    let mut best_err = f64::INFINITY;

    for _ in 0..=cfg.oscillatory_max_zeros {
        let lobe = integrate_adaptive(&f, left, right, &lobe_cfg);
        evals += lobe.evals;
        quad_err += lobe.err_estimate;
        sum = sum + lobe.value;
        partial_sums.push(sum);
        last_terms = [last_terms[1], lobe.value.norm()];

        if right >= settle {
            settled_lobes += 1;
        }

        if settled_lobes >= MIN_SETTLED_LOBES {
            let start = partial_sums.len().saturating_sub(WINDOW);
            let window = &partial_sums[start..];
            let window = if window.len() % 2 == 0 {
                &window[1..]
            } else {
                window
            };
            let est = wynn_epsilon(window);
            estimates.push(est);

            let tol = cfg.tolerance_for(est.norm());
            // Plain summation is already converged.
            if last_terms[0] <= 0.01 * tol && last_terms[1] <= 0.01 * tol {
                let err = quad_err + last_terms[1];
                return QuadratureResult {
                    value: sum,
                    err_estimate: err,
                    evals,
                    converged: err <= tol,
                };
            }
            if estimates.len() >= 3 {
                let n = estimates.len();
                let ext_err = (est - estimates[n - 2])
                    .norm()
                    .max((est - estimates[n - 3]).norm());
                let err = quad_err + ext_err;
                if err < best_err {
                    best_err = err;
                    best = est;
                }
                if err <= tol {
                    return QuadratureResult {
                        value: est,
                        err_estimate: err,
                        evals,
                        converged: true,
                    };
                }
            }
        }

        left = right;
        j += 1.0;
        right = zero_at(j);
    }

    if best_err.is_infinite() {
        best = sum;
    }
    QuadratureResult {
        value: best,
        err_estimate: best_err,
        evals,
        converged: false,
    }
}
