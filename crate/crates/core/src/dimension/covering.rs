use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::PointCloud;
use crate::scalar::Scalar;

/// Smallest admissible `r / δ`.
pub const DEFAULT_GUARD: f64 = 4.0;

/// One localized count `N_r(B(x, R) ∩ F)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub center: Vec<f64>,
    pub big_r: f64,
    pub r: f64,
    pub count: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CoveringProfile {
    pub entries: Vec<ProfileEntry>,
    pub source_resolution: f64,
    pub guard: f64,
}

pub(crate) fn check_floor<T: Scalar>(f: &PointCloud<T>, r: &T, guard: f64) -> Result<()> {
    if *r <= T::zero() {
        return Err(crate::error::invalid(format!("covering scale must be > 0, got {r}")));
    }
    let floor = T::from_f64_lossy(guard) * f.resolution().clone();
    if *r < floor {
        return Err(Error::BelowTrustFloor {
            r: r.lossy(),
            floor: floor.lossy(),
        });
    }
    Ok(())
}

/// Side of a grid cell with diameter `r` in dimension `d`.
pub(crate) fn cell_side<T: Scalar>(r: &T, d: usize) -> T {
    if d == 1 {
        r.clone()
    } else {
        r.clone() / T::from_int(d as i64).square_root()
    }
}

/// Dense grid-cell labels, one per point, plus the number of distinct cells.
///
/// In one dimension the labels are non-decreasing along the (sorted) cloud and
/// consecutive, so the number of cells met by an index range `s..e` is
/// `ids[e - 1] - ids[s] + 1`.
pub(crate) fn cell_ids<T: Scalar>(f: &PointCloud<T>, side: &T) -> (Vec<u32>, usize) {
    let d = f.dim();
    if d == 1 {
        let mut ids = Vec::with_capacity(f.len());
        let mut prev: Option<T::Cell> = None;
        let mut next = 0u32;
        for x in f.values() {
            let c = x.cell_of(side);
            if prev.as_ref() != Some(&c) {
                if prev.is_some() {
                    next += 1;
                }
                prev = Some(c);
            }
            ids.push(next);
        }
        let cells = if ids.is_empty() { 0 } else { next as usize + 1 };
        return (ids, cells);
    }
    let keys: Vec<Vec<T::Cell>> = f
        .points()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|p| p.iter().map(|x| x.cell_of(side)).collect())
        .collect();
    let mut table: HashMap<Vec<T::Cell>, u32> = HashMap::with_capacity(keys.len() / 2 + 1);
    let ids = keys
        .into_iter()
        .map(|k| {
            let next = table.len() as u32;
            *table.entry(k).or_insert(next)
        })
        .collect();
    (ids, table.len())
}

/// Occupied cells of the origin-anchored grid of side `r/√d`; every cell has
/// diameter at most `r`.
pub fn covering_count<T: Scalar>(f: &PointCloud<T>, r: &T) -> Result<usize> {
    covering_count_with_guard(f, r, DEFAULT_GUARD)
}

pub fn covering_count_with_guard<T: Scalar>(f: &PointCloud<T>, r: &T, guard: f64) -> Result<usize> {
    check_floor(f, r, guard)?;
    Ok(cell_ids(f, &cell_side(r, f.dim())).1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let two = PointCloud::from_values(vec![0.0, 1.0]).unwrap();
        assert_eq!(covering_count(&two, &0.5).unwrap(), 2);
        let one = PointCloud::singleton(vec![0.3, 0.4]).unwrap();
        assert_eq!(covering_count(&one, &1e-3).unwrap(), 1);
    }

    #[test]
    fn equispaced_points_fill_ten_or_eleven_cells() {
        let f = PointCloud::from_values((0..=100).map(|i| i as f64 / 100.0).collect()).unwrap();
        let n = covering_count(&f, &0.1).unwrap();
        assert!(n == 10 || n == 11, "{n}");
    }

    #[test]
    fn trust_floor_is_enforced() {
        let f = PointCloud::from_flat(1, vec![0.0, 1.0], 0.01).unwrap();
        assert!(matches!(covering_count(&f, &0.03), Err(Error::BelowTrustFloor { .. })));
        assert!(covering_count(&f, &0.04).is_ok());
        assert!(covering_count_with_guard(&f, &0.03, 2.0).is_ok());
    }

    #[test]
    fn two_dimensional_cells_have_diameter_r() {
        // Side r/√2 ≈ 0.7: the two points are farther apart than r = 0.99.
        let f = PointCloud::new(2, vec![vec![0.0, 0.0], vec![0.71, 0.71]], 0.0).unwrap();
        assert_eq!(covering_count(&f, &0.99).unwrap(), 2);
        assert_eq!(covering_count(&f, &1.99).unwrap(), 1);
    }

    #[test]
    fn one_dimensional_labels_are_consecutive() {
        let f = PointCloud::from_values(vec![0.05, 0.1, 0.15, 0.55, 0.95]).unwrap();
        let (ids, n) = cell_ids(&f, &0.25);
        assert_eq!(ids, vec![0, 0, 0, 1, 2]);
        assert_eq!(n, 3);
    }
}
