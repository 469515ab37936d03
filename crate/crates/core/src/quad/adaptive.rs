use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::kronrod::{gk21, Panel, NODES};
use super::{QuadValue, QuadratureConfig, QuadratureResult};

/// Declares integrable endpoint singularities. Singular endpoints are handled
/// by the substitution `x = a + (b - a) t^2` (mirrored for the upper end),
/// which turns `log` and inverse-square-root behaviour into something the
/// Kronrod rule resolves quickly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Endpoints {
    #[default]
    Regular,
    SingularLower,
    SingularUpper,
    SingularBoth,
}

struct Queued<V> {
    panel: Panel<V>,
    seq: usize,
}

impl<V> PartialEq for Queued<V> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<V> Eq for Queued<V> {}
impl<V> PartialOrd for Queued<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Queued<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.panel
            .err
            .total_cmp(&other.panel.err)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Integrates `f` over `[a, b]`.
///
/// Never fails: if the evaluation budget runs out the returned result has
/// `converged == false` and carries the best estimate so far.
pub fn integrate_adaptive<V, F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> QuadratureResult<V>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    integrate_pieces(f, &[a, b], cfg)
}

/// [`integrate_adaptive`] with an endpoint-singularity hint.
pub fn integrate_adaptive_with<V, F>(
    f: F,
    a: f64,
    b: f64,
    endpoints: Endpoints,
    cfg: &QuadratureConfig,
) -> QuadratureResult<V>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let width = b - a;
    match endpoints {
        Endpoints::Regular => integrate_pieces(f, &[a, b], cfg),
        Endpoints::SingularLower => integrate_pieces(
            |t: f64| f(a + width * t * t) * (2.0 * width * t),
            &[0.0, 1.0],
            cfg,
        ),
        Endpoints::SingularUpper => integrate_pieces(
            |t: f64| f(b - width * t * t) * (2.0 * width * t),
            &[0.0, 1.0],
            cfg,
        ),
        Endpoints::SingularBoth => {
            let mid = 0.5 * (a + b);
            let half = mid - a;
            let lower = integrate_pieces(
                |t: f64| f(a + half * t * t) * (2.0 * half * t),
                &[0.0, 1.0],
                cfg,
            );
            let upper = integrate_pieces(
                |t: f64| f(b - half * t * t) * (2.0 * half * t),
                &[0.0, 1.0],
                cfg,
            );
            let total = lower.combine(upper);
            let tol = cfg.tolerance_for(total.value.norm());
            QuadratureResult {
                converged: total.converged || total.err_estimate <= tol,
                ..total
            }
        }
    }
}

/// Integrates over consecutive pieces `[points[0], points[1]], [points[1],
/// points[2]], ...` sharing one adaptive budget. Interior points are where the
/// integrand has kinks or jumps; the rule never evaluates at panel endpoints.
pub fn integrate_pieces<V, F>(f: F, points: &[f64], cfg: &QuadratureConfig) -> QuadratureResult<V>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    if points.len() < 2 {
        return QuadratureResult::zero();
    }

    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel<V>> = Vec::new();
    let mut seq = 0usize;
    let mut evals = 0usize;

    for w in points.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let panel = gk21(&f, w[0], w[1]);
        evals += NODES;
        heap.push(Queued { panel, seq });
        seq += 1;
    }

    let totals = |heap: &BinaryHeap<Queued<V>>, frozen: &[Panel<V>]| {
        let mut value = V::zero();
        let mut err = 0.0;
        for q in heap.iter() {
            value = value + q.panel.value;
            err += q.panel.err;
        }
        for p in frozen {
            value = value + p.value;
            err += p.err;
        }
        (value, err)
    };

    let (mut value, mut err) = totals(&heap, &frozen);
    let mut budget_exhausted = false;
    loop {
        if !value.is_finite() {
            break;
        }
        if err <= cfg.tolerance_for(value.norm()) {
            // Confirm with the same ordered sum that is reported.
            let (v, e) = ordered_totals(&heap, &frozen);
            if e <= cfg.tolerance_for(v.norm()) {
                break;
            }
            (value, err) = (v, e);
        }
        if evals + 2 * NODES > cfg.max_evals {
            budget_exhausted = true;
            break;
        }
        let Some(Queued { panel, .. }) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (panel.a + panel.b);
        let resolvable = mid != panel.a
            && mid != panel.b
            && (panel.b - panel.a).abs() > 1e-13 * (panel.a.abs() + panel.b.abs());
        if !resolvable {
            frozen.push(panel);
            continue;
        }
        let left = gk21(&f, panel.a, mid);
        let right = gk21(&f, mid, panel.b);
        evals += 2 * NODES;

        value = value - panel.value + left.value + right.value;
        err = err - panel.err + left.err + right.err;

        heap.push(Queued { panel: left, seq });
        heap.push(Queued { panel: right, seq: seq + 1 });
        seq += 2;

        // Periodically resum to keep running totals free of drift.
        if seq % 64 == 0 {
            (value, err) = totals(&heap, &frozen);
        }
    }

    let (value, err) = ordered_totals(&heap, &frozen);

    let converged =
        value.is_finite() && !budget_exhausted && err <= cfg.tolerance_for(value.norm());
    QuadratureResult {
        value,
        err_estimate: err,
        evals,
        converged,
    }
}

/// Sum over panels in left-to-right order, for reproducibility.
fn ordered_totals<V: QuadValue>(heap: &BinaryHeap<Queued<V>>, frozen: &[Panel<V>]) -> (V, f64) {
    let mut panels: Vec<&Panel<V>> = heap.iter().map(|q| &q.panel).chain(frozen.iter()).collect();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a).then(x.b.total_cmp(&y.b)));
    let mut value = V::zero();
    let mut err = 0.0;
    for p in panels {
        value = value + p.value;
        err += p.err;
    }
    (value, err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn polynomial() {
        let r = integrate_adaptive(|x: f64| x * x, 0.0, 1.0, &cfg());
        assert!(r.converged);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn log_endpoint_singularity_with_hint() {
        let r = integrate_adaptive_with(|x: f64| x.ln(), 0.0, 1.0, Endpoints::SingularLower, &cfg());
        assert!(r.converged, "{r:?}");
        assert!((r.value + 1.0).abs() < 1e-9);
    }

    #[test]
    fn inverse_sqrt_both_ends() {
        // ∫_0^1 dx / sqrt(x(1-x)) = π
        let r = integrate_adaptive_with(
            |x: f64| 1.0 / (x * (1.0 - x)).sqrt(),
            0.0,
            1.0,
            Endpoints::SingularBoth,
            &cfg(),
        );
        assert!((r.value - std::f64::consts::PI).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn upper_singularity_hint() {
        let r = integrate_adaptive_with(
            |x: f64| (1.0 - x).ln(),
            0.0,
            1.0,
            Endpoints::SingularUpper,
            &cfg(),
        );
        assert!((r.value + 1.0).abs() < 1e-9);
    }

    #[test]
    fn jump_at_breakpoint_is_exact() {
        let step = |x: f64| if x < 0.3 { 1.0 } else { 5.0 };
        let r = integrate_pieces(step, &[0.0, 0.3, 1.0], &cfg());
        assert!((r.value - (0.3 + 5.0 * 0.7)).abs() < 1e-13);
        assert!(r.evals <= 2 * NODES);
    }

    #[test]
    fn complex_values() {
        let r = integrate_adaptive(
            |x: f64| Complex64::new(0.0, x).exp(),
            0.0,
            std::f64::consts::PI,
            &cfg(),
        );
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_reports_not_converged() {
        let tight = QuadratureConfig {
            abs_tol: 1e-300,
            rel_tol: 1e-300,
            max_evals: 100,
            ..cfg()
        };
        let r = integrate_adaptive(|x: f64| x.sqrt(), 0.0, 1.0, &tight);
        assert!(!r.converged);
        assert!(r.evals <= 100);
    }

    #[test]
    fn converged_implies_within_tolerance() {
        let c = cfg();
        let r = integrate_adaptive(|x: f64| (10.0 * x).sin() / (1.0 + x), 0.0, 20.0, &c);
        assert!(r.converged);
        assert!(r.err_estimate <= c.tolerance_for(r.value.abs()));
    }
}
