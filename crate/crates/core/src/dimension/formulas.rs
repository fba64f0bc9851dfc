use crate::error::{invalid, Result};

/// The unique `s ≥ 0` with `Σ cᵢ^s = 1`.
///
/// # Panics
/// On an empty list or a ratio outside `(0, 1)`.
pub fn similarity_dimension(ratios: &[f64]) -> f64 {
    assert!(!ratios.is_empty(), "similarity dimension of an empty system");
    assert!(
        ratios.iter().all(|&c| c > 0.0 && c < 1.0),
        "ratios must lie in (0,1): {ratios:?}"
    );
    let logs: Vec<f64> = ratios.iter().map(|c| c.ln()).collect();
    similarity_dimension_ln(&logs)
}

/// Same as [`similarity_dimension`], taking `ln cᵢ < 0` directly so that
/// ratios far below `f64::MIN_POSITIVE` (such as `2^(-2^k)`) stay usable.
pub fn similarity_dimension_ln(log_ratios: &[f64]) -> f64 {
    assert!(!log_ratios.is_empty(), "similarity dimension of an empty system");
    assert!(log_ratios.iter().all(|&l| l < 0.0 && l.is_finite()), "log ratios must be negative");
    // Σ exp(s ln c) - 1 is strictly decreasing from m - 1 ≥ 0 at s = 0.
    let excess = |s: f64| log_ratios.iter().map(|l| (s * l).exp()).sum::<f64>() - 1.0;
    if excess(0.0) <= 0.0 {
        return 0.0;
    }
    let mut hi = 1.0;
    while excess(hi) > 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    while hi - lo > 1e-15 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Threshold `d/2 + 1/3` above which the distance-set bound is 1.
pub fn falconer_erdogan_threshold(d: usize) -> f64 {
    d as f64 / 2.0 + 1.0 / 3.0
}

/// `max{(6s + 2 - 3d)/4, s - (d-1)/2}`, without the cap at 1 or the clamp
/// at 0.
pub fn falconer_erdogan_subcritical(d: usize, s: f64) -> f64 {
    let d = d as f64;
    ((6.0 * s + 2.0 - 3.0 * d) / 4.0).max(s - (d - 1.0) / 2.0)
}

/// Lower bound for the Assouad dimension of the distance set of `F ⊂ ℝ^d`
/// with `dim_A F = s`.
///
/// # Panics
/// If `d < 2` or `s ∉ [0, d]`.
pub fn falconer_erdogan_bound(d: usize, s: f64) -> f64 {
    assert!(d >= 2, "ambient dimension must be >= 2, got {d}");
    assert!((0.0..=d as f64).contains(&s), "s = {s} outside [0, {d}]");
    if s >= falconer_erdogan_threshold(d) {
        return 1.0;
    }
    falconer_erdogan_subcritical(d, s).max(0.0)
}

/// `k(d - k) + s - min{k, s_F}`: upper bound for the Hausdorff dimension of
/// the `k`-planes onto which `F` projects with Assouad dimension below `s`.
pub fn exception_bound(d: usize, k: usize, s_f: f64, s: f64) -> Result<f64> {
    if k == 0 || k >= d {
        return Err(invalid(format!("need 1 <= k < d, got k = {k}, d = {d}")));
    }
    let cap = (k as f64).min(s_f);
    if !(s > 0.0) {
        return Err(invalid(format!("need s > 0, got {s}")));
    }
    if s > cap {
        return Err(invalid(format!("need s <= min(k, dim_A F) = {cap}, got {s}")));
    }
    Ok((k * (d - k)) as f64 + s - cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn similarity_dimension_closed_forms() {
        assert!((similarity_dimension(&[0.5, 0.5]) - 1.0).abs() < 1e-12);
        let cantor = 2f64.ln() / 3f64.ln();
        assert!((similarity_dimension(&[1.0 / 3.0, 1.0 / 3.0]) - cantor).abs() < 1e-12);
        for m in 2..6 {
            let c = 0.2f64;
            let want = (m as f64).ln() / (1.0 / c).ln();
            assert!((similarity_dimension(&vec![c; m]) - want).abs() < 1e-9);
        }
    }

    #[test]
    fn one_ratio_gives_zero() {
        assert_eq!(similarity_dimension(&[0.5]), 0.0);
    }

    #[test]
    fn doubly_exponential_stage_ratios() {
        for k in 1..=10 {
            let l = -(2f64.powi(k)) * 2f64.ln();
            let s = similarity_dimension_ln(&[l, l]);
            assert!((s - 2f64.powi(-k)).abs() < 1e-10, "k={k}: {s}");
        }
    }

    #[test]
    fn falconer_erdogan_examples() {
        assert_eq!(falconer_erdogan_bound(2, 4.0 / 3.0), 1.0);
        assert_eq!(falconer_erdogan_bound(2, 0.5), 0.0);
        assert_eq!(falconer_erdogan_bound(3, 2.0), 1.0);
        for d in 2..=6 {
            let t = falconer_erdogan_threshold(d);
            assert!((falconer_erdogan_subcritical(d, t) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exception_bound_examples() {
        assert_eq!(exception_bound(2, 1, 1.5, 1.0).unwrap(), 1.0);
        assert_eq!(exception_bound(2, 1, 1.5, 0.5).unwrap(), 0.5);
        assert_eq!(exception_bound(3, 2, 2.0, 2.0).unwrap(), 2.0);
        assert!(exception_bound(2, 2, 1.0, 0.5).is_err());
        assert!(exception_bound(2, 1, 0.5, 0.7).is_err());
        assert!(exception_bound(2, 1, 0.5, 0.0).is_err());
    }
}
