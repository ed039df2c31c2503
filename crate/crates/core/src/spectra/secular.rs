//! Bisection root finding for the corona Laplacian secular equation
//! `x - k - sum_j m_j/(x - p_j) = lambda` with poles `p_j = 2 d_j^- + 1`.

use super::SpectraError;

/// All real roots, one per pole-bounded interval.
///
/// `poles` are the distinct pole values with multiplicities, ascending. The
/// left-hand side is strictly increasing between consecutive poles, so each
/// of the `r + 1` intervals (two outer brackets included) holds exactly one
/// root. Roots are bisected to width `1e-10`.
pub fn secular_roots(
    lambda: f64,
    k: usize,
    poles: &[(f64, usize)],
) -> Result<Vec<f64>, SpectraError> {
    assert!(!poles.is_empty());
    debug_assert!(poles.windows(2).all(|w| w[0].0 < w[1].0));

    let g = |x: f64| {
        let mut s = x - k as f64 - lambda;
        for &(p, m) in poles {
            s -= m as f64 / (x - p);
        }
        s
    };

    let p_min = poles[0].0;
    let p_max = poles[poles.len() - 1].0;
    let margin = k as f64 + lambda.abs() + 2.0;

    let mut brackets: Vec<(f64, f64)> = Vec::with_capacity(poles.len() + 1);
    brackets.push((p_min - margin, p_min));
    for w in poles.windows(2) {
        brackets.push((w[0].0, w[1].0));
    }
    brackets.push((p_max, p_max + margin));

    let mut roots = Vec::with_capacity(brackets.len());
    for (idx, &(left, right)) in brackets.iter().enumerate() {
        let left_is_pole = idx > 0;
        let right_is_pole = idx + 1 < brackets.len();
        let width = right - left;

        // Nudge endpoints off the poles until the signs bracket the root;
        // g -> -inf at a left pole and +inf at a right pole.
        let mut lo = if left_is_pole { left + width * 0.25 } else { left };
        let mut shrink = width * 0.25;
        while g(lo) >= 0.0 {
            shrink *= 0.25;
            lo = left + shrink;
            if shrink < f64::EPSILON * width.max(1.0) {
                return Err(SpectraError::BracketFailure { lambda, interval: idx });
            }
        }
        let mut hi = if right_is_pole {
            right - width * 0.25
        } else {
            right
        };
        let mut shrink = width * 0.25;
        while g(hi) <= 0.0 {
            shrink *= 0.25;
            hi = right - shrink;
            if shrink < f64::EPSILON * width.max(1.0) {
                return Err(SpectraError::BracketFailure { lambda, interval: idx });
            }
        }

        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo < 1e-10 {
                break;
            }
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    Ok(roots)
}
