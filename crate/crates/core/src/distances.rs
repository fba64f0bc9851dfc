//! Distance sets and the log-lattice density mechanism.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geom::{dist, PointCloud};
use crate::scalar::Scalar;

pub const DEFAULT_PAIR_CAP: usize = 10_000_000;

fn check_pairs(projected: u128, cap: usize) -> Result<()> {
    if projected > cap as u128 {
        return Err(Error::PairCap { projected, cap });
    }
    Ok(())
}

/// `{|x - y| : x, y ∈ F}` including 0, as a sorted 1-d cloud with
/// resolution `2δ`.
pub fn distance_set<T: Scalar>(f: &PointCloud<T>, pair_cap: usize) -> Result<PointCloud<T>> {
    let n = f.len() as u128;
    check_pairs(n * (n - 1) / 2, pair_cap)?;
    let rows: Vec<Vec<T>> = (0..f.len())
        .into_par_iter()
        .map(|i| {
            let p = f.point(i);
            ((i + 1)..f.len()).map(|j| dist(p, f.point(j))).collect()
        })
        .collect();
    let mut values = Vec::with_capacity(rows.iter().map(Vec::len).sum::<usize>() + 1);
    values.push(T::zero());
    values.extend(rows.into_iter().flatten());
    PointCloud::from_flat(1, values, two(f.resolution()))
}

fn two<T: Scalar>(x: &T) -> T {
    x.clone() + x.clone()
}

/// `|π(F × F)|` with `π(x, y) = x - y`: the same set as [`distance_set`],
/// reached through the product and a projection.
pub fn distance_set_via_projection<T: Scalar>(f: &PointCloud<T>, pair_cap: usize) -> Result<PointCloud<T>> {
    if f.dim() != 1 {
        return Err(invalid(format!(
            "the projection pipeline needs a 1-d cloud, got dimension {}",
            f.dim()
        )));
    }
    let n = f.len() as u128;
    check_pairs(n * n, pair_cap)?;
    let square = crate::constructions::product(f, f, pair_cap)?;
    let diffs: Vec<T> = square
        .coords()
        .par_chunks_exact(2)
        .map(|p| (p[0].clone() - p[1].clone()).abs())
        .collect();
    PointCloud::from_flat(1, diffs, two(f.resolution()))
}

/// Largest gap of the log lattice `{m ln a + n ln b}` inside a window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub window: (f64, f64),
    pub max_gap: f64,
    /// Location `(lo, hi)` of the largest gap.
    pub gap_at: (f64, f64),
    pub sample_count: usize,
    pub a: f64,
    pub b: f64,
    #[serde(rename = "M")]
    pub m: usize,
}

/// Values closer than this are one lattice point (rounding in `m ln a + n ln b`).
pub const LATTICE_MERGE: f64 = 1e-9;

/// Lattice values `m ln a + n ln b` for `0 ≤ m ≤ M`, `|n| ≤ M`, sorted, with
/// values within [`LATTICE_MERGE`] merged.
pub fn log_lattice(a: f64, b: f64, big_m: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    let m = big_m as i64;
    let mut v: Vec<f64> = (0..=m)
        .flat_map(|i| (-m..=m).map(move |j| i as f64 * la + j as f64 * lb))
        .collect();
    v.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    v.dedup_by(|x, kept| *x - *kept <= LATTICE_MERGE);
    v
}

/// Enumerates the log lattice, keeps the points in `window` and reports the
/// largest gap between consecutive points. The nearest lattice points outside
/// the window close the first and last gaps; the window endpoints stand in
/// only when the lattice has nothing beyond them.
pub fn log_lattice_gaps(a: f64, b: f64, big_m: usize, window: (f64, f64)) -> Result<GapReport> {
    for (name, r) in [("a", a), ("b", b)] {
        if !(r > 0.0 && r < 1.0) {
            return Err(invalid(format!("{name} must lie in (0,1), got {r}")));
        }
    }
    if big_m == 0 {
        return Err(invalid("M must be >= 1"));
    }
    let (lo, hi) = window;
    if !(lo < hi && hi < 0.0) {
        return Err(invalid(format!("window must satisfy lo < hi < 0, got [{lo}, {hi}]")));
    }
    let lattice = log_lattice(a, b, big_m);
    let start = lattice.partition_point(|&x| x < lo);
    let end = lattice.partition_point(|&x| x <= hi);
    if start == end {
        return Err(Error::EmptyIntersection(format!(
            "no lattice point in [{lo}, {hi}] for M = {big_m}; increase M or widen the window"
        )));
    }
    let below = if start > 0 { lattice[start - 1] } else { lo };
    let above = lattice.get(end).copied().unwrap_or(hi);
    let mut pts = Vec::with_capacity(end - start + 2);
    pts.push(below);
    pts.extend_from_slice(&lattice[start..end]);
    pts.push(above);
    let (max_gap, gap_at) = pts
        .windows(2)
        .map(|w| (w[1] - w[0], (w[0], w[1])))
        .fold((0.0, (lo, lo)), |best, cur| if cur.0 > best.0 { cur } else { best });
    Ok(GapReport {
        window,
        max_gap,
        gap_at,
        sample_count: end - start,
        a,
        b,
        m: big_m,
    })
}

/// One row of [`moran_schedule_search`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleRow {
    pub k: usize,
    /// Smallest even `N(k)` meeting the target, if one was found.
    pub n: Option<usize>,
    pub hausdorff: f64,
    pub target: f64,
}

/// Hausdorff distance from `{a^(2^k m) b^(2^k n) : 0 ≤ m ≤ N, |n| ≤ N/2} ∩ [0,1]`
/// to `[0,1]`.
pub fn rescaled_lattice_distance(a: f64, b: f64, k: usize, n: usize) -> f64 {
    let scale = (k as f64).exp2();
    let (la, lb) = (scale * a.ln(), scale * b.ln());
    let half = (n / 2) as i64;
    let mut xs: Vec<f64> = (0..=n as i64)
        .flat_map(|m| (-half..=half).map(move |j| m as f64 * la + j as f64 * lb))
        .filter(|&l| l <= 0.0)
        .map(f64::exp)
        .collect();
    xs.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    let first = xs.first().copied().unwrap_or(1.0);
    let last = xs.last().copied().unwrap_or(0.0);
    let inner = xs.windows(2).map(|w| (w[1] - w[0]) / 2.0).fold(0.0, f64::max);
    first.max(1.0 - last).max(inner)
}

/// For each `k ≤ kmax`, the smallest even `N(k) ≤ n_max` making the rescaled
/// lattice `1/k`-dense in `[0,1]`. The lattices are nested in `N`, so the
/// distance is non-increasing and a bisection over even `N` is exact.
pub fn moran_schedule_search(a: f64, b: f64, kmax: usize, n_max: usize) -> Result<Vec<ScheduleRow>> {
    if !(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0) {
        return Err(invalid("a and b must lie in (0,1)"));
    }
    if kmax == 0 || n_max < 2 {
        return Err(invalid("need kmax >= 1 and n_max >= 2"));
    }
    Ok((1..=kmax)
        .into_par_iter()
        .map(|k| {
            let target = 1.0 / k as f64;
            let ok = |n: usize| rescaled_lattice_distance(a, b, k, n) < target;
            let top = n_max / 2;
            if !ok(2 * top) {
                return ScheduleRow {
                    k,
                    n: None,
                    hausdorff: rescaled_lattice_distance(a, b, k, 2 * top),
                    target,
                };
            }
            let (mut lo, mut hi) = (1, top);
            while lo < hi {
                let mid = (lo + hi) / 2;
                if ok(2 * mid) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            ScheduleRow {
                k,
                n: Some(2 * lo),
                hausdorff: rescaled_lattice_distance(a, b, k, 2 * lo),
                target,
            }
        })
        .collect())
}
