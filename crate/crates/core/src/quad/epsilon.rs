use super::QuadValue;

/// Wynn's epsilon algorithm applied to the partial sums `s`.
///
/// Returns the highest-order even-column entry that could be formed. A zero
/// difference between neighbouring entries ends the table early, in which case
/// the last entry formed so far is returned.
pub fn wynn_epsilon<V: QuadValue>(s: &[V]) -> V {
    let Some(&last) = s.last() else {
        return V::zero();
    };
    let n = s.len();
    let mut best = last;
    let mut prev = vec![V::zero(); n + 1];
    let mut cur = s.to_vec();
    for k in 1..n {
        let mut next = Vec::with_capacity(n - k);
        for j in 0..n - k {
            let d = cur[j + 1] - cur[j];
            if d.norm() == 0.0 || !d.is_finite() {
                return best;
            }
            let e = prev[j + 1] + d.recip();
            if !e.is_finite() {
                return best;
            }
            next.push(e);
        }
        if k % 2 == 0 {
            best = next[next.len() - 1];
        }
        prev = cur;
        cur = next;
    }
    best
}
