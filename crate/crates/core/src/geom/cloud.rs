use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::{max_of, min_of, Scalar};

/// A finite, deduplicated point set in `R^dim` that approximates some ideal
/// compact set to within `resolution` in the Hausdorff metric.
///
/// Points are stored flat and kept in lexicographic order, so two clouds
/// holding the same set compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud<T: Scalar> {
    dim: usize,
    coords: Vec<T>,
    resolution: T,
}

pub(crate) fn lex_cmp<T: PartialOrd>(a: &[T], b: &[T]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    Ordering::Equal
}

pub(crate) fn dist_sq<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| {
        let d = x.clone() - y.clone();
        acc + d.clone() * d
    })
}

/// Euclidean distance; exact in one dimension.
pub(crate) fn dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    if a.len() == 1 {
        (a[0].clone() - b[0].clone()).abs()
    } else {
        dist_sq(a, b).square_root()
    }
}

impl<T: Scalar> PointCloud<T> {
    /// Builds a cloud from flat coordinates, sorting and removing points
    /// within [`Scalar::dedup_tolerance`] of an already kept point.
    pub fn from_flat(dim: usize, coords: Vec<T>, resolution: T) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if coords.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::RaggedPoint {
                index: coords.len() / dim,
                expected: dim,
                found: coords.len() % dim,
            });
        }
        if resolution < T::zero() || !resolution.is_finite_value() {
            return Err(Error::InvalidParameter("resolution must be finite and >= 0".into()));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite_value()) {
            return Err(Error::NonFinite(i / dim));
        }
        let n = coords.len() / dim;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_unstable_by(|&i, &j| {
            lex_cmp(&coords[i * dim..(i + 1) * dim], &coords[j * dim..(j + 1) * dim])
        });

        let tol = T::dedup_tolerance();
        let tol_sq = tol.clone() * tol.clone();
        let mut kept: Vec<usize> = Vec::with_capacity(n);
        // Sorted by first coordinate, so a near-duplicate of point i can only
        // sit among kept points whose first coordinate is within `tol`.
        for &i in &order {
            let p = &coords[i * dim..(i + 1) * dim];
            let mut dup = false;
            for &j in kept.iter().rev() {
                let q = &coords[j * dim..(j + 1) * dim];
                if p[0].clone() - q[0].clone() > tol {
                    break;
                }
                if dist_sq(p, q) <= tol_sq {
                    dup = true;
                    break;
                }
            }
            if !dup {
                kept.push(i);
            }
        }
        let mut flat = Vec::with_capacity(kept.len() * dim);
        for &i in &kept {
            flat.extend_from_slice(&coords[i * dim..(i + 1) * dim]);
        }
        Ok(Self {
            dim,
            coords: flat,
            resolution,
        })
    }

    pub fn new(dim: usize, points: Vec<Vec<T>>, resolution: T) -> Result<Self> {
        let mut flat = Vec::with_capacity(points.len() * dim);
        for (index, p) in points.into_iter().enumerate() {
            if p.len() != dim {
                return Err(Error::RaggedPoint {
                    index,
                    expected: dim,
                    found: p.len(),
                });
            }
            flat.extend(p);
        }
        Self::from_flat(dim, flat, resolution)
    }

    /// Exact one-dimensional cloud.
    pub fn from_values(values: Vec<T>) -> Result<Self> {
        Self::from_flat(1, values, T::zero())
    }

    pub fn singleton(point: Vec<T>) -> Result<Self> {
        let d = point.len();
        Self::from_flat(d, point, T::zero())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn resolution(&self) -> &T {
        &self.resolution
    }

    pub fn with_resolution(mut self, resolution: T) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[T]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    /// Coordinates of a one-dimensional cloud, ascending.
    pub fn values(&self) -> &[T] {
        assert_eq!(self.dim, 1, "values() needs a one-dimensional cloud");
        &self.coords
    }

    pub fn to_f64(&self) -> PointCloud<f64> {
        PointCloud::from_flat(
            self.dim,
            self.coords.iter().map(Scalar::lossy).collect(),
            self.resolution.lossy(),
        )
        .expect("a valid cloud converts to a valid cloud")
    }

    pub fn from_f64(cloud: &PointCloud<f64>) -> Self {
        Self::from_flat(
            cloud.dim,
            cloud.coords.iter().map(|&x| T::from_f64_lossy(x)).collect(),
            T::from_f64_lossy(cloud.resolution),
        )
        .expect("a valid cloud converts to a valid cloud")
    }

    /// Per-axis `(min, max)`.
    pub fn bounds(&self) -> Vec<(T, T)> {
        let mut b: Vec<(T, T)> = self.point(0).iter().map(|x| (x.clone(), x.clone())).collect();
        for p in self.points() {
            for (axis, x) in p.iter().enumerate() {
                let (lo, hi) = &mut b[axis];
                *lo = min_of(lo.clone(), x.clone());
                *hi = max_of(hi.clone(), x.clone());
            }
        }
        b
    }

    /// Largest per-axis extent; a lower bound on the diameter that is within
    /// a factor `sqrt(dim)` of it.
    pub fn extent(&self) -> T {
        self.bounds()
            .into_iter()
            .fold(T::zero(), |m, (lo, hi)| max_of(m, hi - lo))
    }

    /// Exact diameter (quadratic in the number of points, linear in 1-D).
    pub fn diameter(&self) -> T {
        if self.dim == 1 {
            let v = self.values();
            return v[v.len() - 1].clone() - v[0].clone();
        }
        let mut best = T::zero();
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                best = max_of(best, dist_sq(self.point(i), self.point(j)));
            }
        }
        best.square_root()
    }

    /// Index range of points whose first coordinate lies in `[lo, hi]`.
    pub(crate) fn first_axis_range(&self, lo: &T, hi: &T) -> (usize, usize) {
        let n = self.len();
        let start = partition_point(n, |i| self.coords[i * self.dim] < *lo);
        let end = partition_point(n, |i| self.coords[i * self.dim] <= *hi);
        (start, end.max(start))
    }

    /// Indices of points in the closed ball `B(center, radius)`.
    pub(crate) fn ball_indices(&self, center: &[T], radius: &T) -> Vec<usize> {
        let lo = center[0].clone() - radius.clone();
        let hi = center[0].clone() + radius.clone();
        let (s, e) = self.first_axis_range(&lo, &hi);
        if self.dim == 1 {
            return (s..e).collect();
        }
        let r_sq = radius.clone() * radius.clone();
        (s..e)
            .filter(|&i| dist_sq(self.point(i), center) <= r_sq)
            .collect()
    }

    /// Index of the point nearest to `target`.
    pub fn nearest_index(&self, target: &[T]) -> usize {
        let mut best = 0;
        let mut best_d = dist_sq(self.point(0), target);
        for i in 1..self.len() {
            let d = dist_sq(self.point(i), target);
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    }

    pub(crate) fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim != other {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other,
            });
        }
        Ok(())
    }
}

/// First index in `0..n` for which `pred` is false (pred must be monotone).
pub(crate) fn partition_point(n: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}
