use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geom::cloud::{dist_sq, PointCloud};
use crate::scalar::Scalar;

/// Closed reference region `X` for zooms: a ball or an axis-aligned cube.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Window<T> {
    Ball { center: Vec<T>, radius: T },
    Box { corner: Vec<T>, side: T },
}

impl<T: Scalar> Window<T> {
    pub fn ball(center: Vec<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(invalid("window radius must be positive"));
        }
        Ok(Window::Ball { center, radius })
    }

    pub fn cube(corner: Vec<T>, side: T) -> Result<Self> {
        if !(side > T::zero()) {
            return Err(invalid("window side must be positive"));
        }
        Ok(Window::Box { corner, side })
    }

    /// `[0,1]^dim`.
    pub fn unit_box(dim: usize) -> Self {
        Window::Box {
            corner: vec![T::zero(); dim],
            side: T::one(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Window::Ball { center, .. } => center.len(),
            Window::Box { corner, .. } => corner.len(),
        }
    }

    /// Closed membership: boundary points are inside.
    pub fn contains(&self, p: &[T]) -> bool {
        match self {
            Window::Ball { center, radius } => dist_sq(p, center) <= radius.clone() * radius.clone(),
            Window::Box { corner, side } => p
                .iter()
                .zip(corner)
                .all(|(x, c)| *x >= *c && x.clone() <= c.clone() + side.clone()),
        }
    }

    pub fn diameter(&self) -> T {
        match self {
            Window::Ball { radius, .. } => radius.clone() + radius.clone(),
            Window::Box { corner, side } => {
                (side.clone() * side.clone() * T::from_int(corner.len() as i64)).square_root()
            }
        }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Window<U> {
        match self {
            Window::Ball { center, radius } => Window::Ball {
                center: center.iter().map(&f).collect(),
                radius: f(radius),
            },
            Window::Box { corner, side } => Window::Box {
                corner: corner.iter().map(&f).collect(),
                side: f(side),
            },
        }
    }
}

/// `f ∩ X`, or `None` when no point of `f` lies in the window.
pub fn window_intersect<T: Scalar>(cloud: &PointCloud<T>, window: &Window<T>) -> Result<Option<PointCloud<T>>> {
    cloud.check_dim(window.dim())?;
    let mut flat = Vec::new();
    for p in cloud.points().filter(|p| window.contains(p)) {
        flat.extend_from_slice(p);
    }
    if flat.is_empty() {
        return Ok(None);
    }
    PointCloud::from_flat(cloud.dim(), flat, cloud.resolution().clone()).map(Some)
}
