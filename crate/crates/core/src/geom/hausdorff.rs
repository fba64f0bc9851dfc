//! Exact Hausdorff distance between finite clouds.
//!
//! Both clouds are sorted along the first axis; the nearest-neighbour scan
//! for a point expands outward from its insertion position and stops once
//! the first-axis gap alone exceeds the best distance found. A point whose
//! nearest distance already falls below the running maximum is abandoned
//! early, since it cannot raise the result.

use crate::error::{Error, Result};
use crate::geom::cloud::{dist_sq, partition_point, PointCloud};
use crate::scalar::Scalar;

/// Squared directed distance `sup_{x∈a} dist(x, b)^2`.
fn directed_sq<T: Scalar>(a: &PointCloud<T>, b: &PointCloud<T>) -> T {
    let d = b.dim();
    let first = |i: usize| &b.coords()[i * d];
    let n = b.len();
    let mut running_max = T::zero();
    for p in a.points() {
        let start = partition_point(n, |i| *first(i) < p[0]);
        let mut best: Option<T> = None;
        let gap_ok = |i: usize, best: &Option<T>| -> bool {
            match best {
                None => true,
                Some(bv) => {
                    let g = first(i).clone() - p[0].clone();
                    g.clone() * g <= *bv
                }
            }
        };
        let (mut lo, mut hi) = (start, start);
        loop {
            let mut moved = false;
            if hi < n && gap_ok(hi, &best) {
                let ds = dist_sq(p, b.point(hi));
                if best.as_ref().is_none_or(|bv| ds < *bv) {
                    best = Some(ds);
                }
                hi += 1;
                moved = true;
            }
            if lo > 0 && gap_ok(lo - 1, &best) {
                let ds = dist_sq(p, b.point(lo - 1));
                if best.as_ref().is_none_or(|bv| ds < *bv) {
                    best = Some(ds);
                }
                lo -= 1;
                moved = true;
            }
            if !moved || best.as_ref().is_some_and(|bv| *bv <= running_max) {
                break;
            }
        }
        if let Some(bv) = best {
            if bv > running_max {
                running_max = bv;
            }
        }
    }
    running_max
}

/// `max(sup_{x∈a} dist(x,b), sup_{y∈b} dist(y,a))`.
pub fn hausdorff_distance<T: Scalar>(a: &PointCloud<T>, b: &PointCloud<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let ab = directed_sq(a, b);
    let ba = directed_sq(b, a);
    let m = if ab > ba { ab } else { ba };
    Ok(m.square_root())
}
