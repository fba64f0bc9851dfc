use crate::error::{invalid, Error, Result};
use crate::geom::cloud::PointCloud;
use crate::scalar::{max_of, Scalar};

/// `x ↦ scale · O x + translation` with `O` orthogonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMap<T: Scalar> {
    scale: T,
    /// Row-major `dim × dim`.
    orthogonal: Vec<T>,
    translation: Vec<T>,
}

impl<T: Scalar> SimilarityMap<T> {
    pub fn new(scale: T, orthogonal: Vec<Vec<T>>, translation: Vec<T>) -> Result<Self> {
        let d = translation.len();
        if d == 0 {
            return Err(invalid("similarity map needs a positive dimension"));
        }
        if orthogonal.len() != d || orthogonal.iter().any(|row| row.len() != d) {
            return Err(Error::DimensionMismatch {
                left: orthogonal.len(),
                right: d,
            });
        }
        Self::from_parts(scale, orthogonal.into_iter().flatten().collect(), translation)
    }

    fn from_parts(scale: T, orthogonal: Vec<T>, translation: Vec<T>) -> Result<Self> {
        if !(scale > T::zero()) || !scale.is_finite_value() {
            return Err(invalid(format!("similarity scale must be > 0, got {scale}")));
        }
        let d = translation.len();
        let tol = T::orthogonality_tolerance();
        let mut worst = T::zero();
        for i in 0..d {
            for j in 0..d {
                let mut dot = T::zero();
                for k in 0..d {
                    dot = dot + orthogonal[k * d + i].clone() * orthogonal[k * d + j].clone();
                }
                let target = if i == j { T::one() } else { T::zero() };
                worst = max_of(worst, (dot - target).abs());
            }
        }
        if worst > tol {
            return Err(Error::NotOrthogonal {
                deviation: worst.lossy(),
            });
        }
        Ok(Self {
            scale,
            orthogonal,
            translation,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self::scaling(dim, T::one())
    }

    /// `x ↦ c x`.
    pub fn scaling(dim: usize, c: T) -> Self {
        Self::homothety(c, vec![T::zero(); dim])
    }

    /// `x ↦ c x + t` (no rotation). Panics on a non-positive `c`.
    pub fn homothety(c: T, translation: Vec<T>) -> Self {
        let d = translation.len();
        let mut o = vec![T::zero(); d * d];
        for i in 0..d {
            o[i * d + i] = T::one();
        }
        assert!(c > T::zero(), "homothety ratio must be positive");
        Self {
            scale: c,
            orthogonal: o,
            translation,
        }
    }

    /// `x ↦ c (x - center)`: blow-up about `center`.
    pub fn zoom_about(center: &[T], c: T) -> Self {
        let t = center.iter().map(|x| -(c.clone() * x.clone())).collect();
        Self::homothety(c, t)
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn scale(&self) -> &T {
        &self.scale
    }

    pub fn translation(&self) -> &[T] {
        &self.translation
    }

    pub fn orthogonal_row(&self, i: usize) -> &[T] {
        let d = self.dim();
        &self.orthogonal[i * d..(i + 1) * d]
    }

    fn is_rotation_free(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| {
            (0..d).all(|j| {
                let v = &self.orthogonal[i * d + j];
                if i == j {
                    v.is_one()
                } else {
                    v.is_zero()
                }
            })
        })
    }

    pub fn apply_point(&self, p: &[T]) -> Vec<T> {
        let d = self.dim();
        if self.is_rotation_free() {
            return p
                .iter()
                .zip(&self.translation)
                .map(|(x, t)| self.scale.clone() * x.clone() + t.clone())
                .collect();
        }
        (0..d)
            .map(|i| {
                let rot = (0..d).fold(T::zero(), |acc, j| {
                    acc + self.orthogonal[i * d + j].clone() * p[j].clone()
                });
                self.scale.clone() * rot + self.translation[i].clone()
            })
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let d = self.dim();
        if inner.dim() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: inner.dim(),
            });
        }
        let mut o = vec![T::zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                o[i * d + j] = (0..d).fold(T::zero(), |acc, k| {
                    acc + self.orthogonal[i * d + k].clone() * inner.orthogonal[k * d + j].clone()
                });
            }
        }
        Ok(Self {
            scale: self.scale.clone() * inner.scale.clone(),
            orthogonal: o,
            translation: self.apply_point(&inner.translation),
        })
    }

    pub fn inverse(&self) -> Self {
        let d = self.dim();
        let inv_c = T::one() / self.scale.clone();
        let mut ot = vec![T::zero(); d * d];
        for i in 0..d {
            for j in 0..d {
                ot[i * d + j] = self.orthogonal[j * d + i].clone();
            }
        }
        let t = (0..d)
            .map(|i| {
                -(0..d).fold(T::zero(), |acc, j| {
                    acc + ot[i * d + j].clone() * self.translation[j].clone()
                }) * inv_c.clone()
            })
            .collect();
        Self {
            scale: inv_c,
            orthogonal: ot,
            translation: t,
        }
    }

    /// Solves `x = T(x)`; exists and is unique when `scale < 1`.
    pub fn fixed_point(&self) -> Result<Vec<T>> {
        let d = self.dim();
        // (I - cO) x = t, by Gaussian elimination with partial pivoting.
        let mut a: Vec<Vec<T>> = (0..d)
            .map(|i| {
                let mut row: Vec<T> = (0..d)
                    .map(|j| {
                        let id = if i == j { T::one() } else { T::zero() };
                        id - self.scale.clone() * self.orthogonal[i * d + j].clone()
                    })
                    .collect();
                row.push(self.translation[i].clone());
                row
            })
            .collect();
        for col in 0..d {
            let pivot = (col..d)
                .max_by(|&x, &y| {
                    a[x][col]
                        .abs()
                        .partial_cmp(&a[y][col].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            if a[pivot][col].is_zero() {
                return Err(invalid("similarity map has no unique fixed point"));
            }
            a.swap(col, pivot);
            let pivot_row = a[col].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != col {
                    let f = row[col].clone() / pivot_row[col].clone();
                    for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                        *x = x.clone() - p.clone() * f.clone();
                    }
                }
            }
        }
        Ok((0..d).map(|i| a[i][d].clone() / a[i][i].clone()).collect())
    }
}

/// Pointwise image of a cloud; the resolution scales by the map's ratio.
pub fn apply_similarity<T: Scalar>(map: &SimilarityMap<T>, cloud: &PointCloud<T>) -> Result<PointCloud<T>> {
    cloud.check_dim(map.dim())?;
    let mut flat = Vec::with_capacity(cloud.coords().len());
    for p in cloud.points() {
        flat.extend(map.apply_point(p));
    }
    PointCloud::from_flat(
        cloud.dim(),
        flat,
        map.scale().clone() * cloud.resolution().clone(),
    )
}
