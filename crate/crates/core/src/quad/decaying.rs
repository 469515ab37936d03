use super::{integrate_adaptive, QuadValue, QuadratureConfig, QuadratureResult};
use crate::Error;

const MAX_SEGMENTS: usize = 64;

/// Integrates `f` over `[a, ∞)` for integrands bounded by `C exp(-β x)` with
/// `β ≈ decay_rate_hint`.
///
/// Segments of length `40/β` are added until one contributes less than a
/// tenth of the tolerance. An integrand whose segment contributions stop
/// shrinking is reported as [`Error::NotDecaying`].
pub fn integrate_decaying<V, F>(
    f: F,
    a: f64,
    decay_rate_hint: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult<V>, Error>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    if !(decay_rate_hint > 0.0 && decay_rate_hint.is_finite()) {
        return Err(Error::Domain(format!(
            "decay rate hint must be positive and finite, got {decay_rate_hint}"
        )));
    }
    let seg_len = 40.0 / decay_rate_hint;
    let mut total = QuadratureResult::<V>::zero();
    let mut previous: Option<f64> = None;
    let mut growth_streak = 0;

    for k in 0..MAX_SEGMENTS {
        let lo = a + k as f64 * seg_len;
        let hi = lo + seg_len;
        let seg = integrate_adaptive(&f, lo, hi, cfg);
        total = total.combine(seg);
        let size = seg.value.norm();
        let tol = cfg.tolerance_for(total.value.norm());
        if size < 0.1 * tol {
            return Ok(total);
        }
        if let Some(prev) = previous {
            if size >= prev {
                growth_streak += 1;
                if growth_streak >= 2 {
                    return Err(Error::NotDecaying {
                        segments: k + 1,
                        last_contribution: size,
                    });
                }
            } else {
                growth_streak = 0;
            }
        }
        previous = Some(size);
    }
    Err(Error::NotDecaying {
        segments: MAX_SEGMENTS,
        last_contribution: previous.unwrap_or(f64::NAN),
    })
}
